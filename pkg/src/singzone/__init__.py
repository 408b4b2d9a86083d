"""Singular zones of quadrotor feedback linearization, and a switched controller that avoids them."""
from .control import GainSet, ReferenceSet, delta_altatt, fl_law, outer_loop_v
from .decoupling import DecouplingSystem, Mode, delta_matrix, delta_yawpos, invert_delta
from .errors import (ConfigError, DomainError, EmptyContour, GridMismatch, OrderError,
                     SingularMatrix, SingzoneError)
from .liederiv import LieTable, OutputSelector, flow_taylor, input_coupling, numeric_row
from .model import QuadParams, State14, VirtualInput, drift_field, state_derivative, thrust_axis
from .sim import (FixedMode, Scenario, Switching, Termination, TimeSeries, bundled_scenario,
                  rk4_step, run_scenario)
from .singularity import (Classification, ScanKind, discrepancy_report, s_value, scan_grid,
                          zero_contour)
from .supervisor import ZoneSpec, classify, step_mode

__version__ = "0.1.0"

__all__ = [
    "QuadParams", "State14", "VirtualInput", "thrust_axis", "drift_field", "state_derivative",
    "OutputSelector", "LieTable", "flow_taylor", "input_coupling", "numeric_row",
    "Mode", "DecouplingSystem", "delta_matrix", "delta_yawpos", "invert_delta",
    "ScanKind", "Classification", "s_value", "scan_grid", "zero_contour", "discrepancy_report",
    "GainSet", "ReferenceSet", "outer_loop_v", "fl_law", "delta_altatt",
    "ZoneSpec", "classify", "step_mode",
    "Scenario", "FixedMode", "Switching", "Termination", "TimeSeries", "rk4_step", "run_scenario",
    "bundled_scenario",
    "SingzoneError", "DomainError", "OrderError", "SingularMatrix", "EmptyContour", "GridMismatch",
    "ConfigError",
]
