"""Approximation-degree-based (ADB) interpolation and instance-based learning."""

from .approx import (
    ApproximationRegion,
    Side,
    approximation_degree,
    estimate_value,
    inverse_degree,
    vector_degree,
)
from .grid import RegularGrid, nearest_node, nearest_nodes, node_region
from .interp import (
    AxisContribution,
    axis_contributions,
    interp_axis,
    interpolate,
    interpolate_1d,
    interpolate_many,
    sum_times_difference,
)
from .learner import (
    UNCLASSIFIED,
    Classified,
    ClassifierModel,
    LabeledExampleSet,
    Regression,
    RegressionModel,
    Unclassified,
    classify,
    classify_many,
    fit_classifier,
    fit_regression,
    make_example_set,
    predict_regression,
    predict_regression_many,
)

__version__ = "0.1.0"
