"""Multi-PTZ-camera scheduling via time-expanded min-cost flow.

Tracking (Kalman), grouping (greedy set cover), valuation (urgency-ranked
integer values), a time-expanded flow model with an exact solver, a
receding-horizon planner, and a discrete-event pedestrian simulator with
a master-slave baseline for comparison.
"""

__version__ = "0.1.0"
