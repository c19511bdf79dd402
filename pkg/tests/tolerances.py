"""Numerical tolerances shared by the suite."""

CLOSED_FORM_IDEAL_REL = 1e-10
CLOSED_FORM_ASYM_REL = 1e-9
ETA_CONTINUITY_GAP = 1e-9
ET_POWER_REL = 5e-3
SLOPE_IDEAL = (-1.05, -0.95)
SLOPE_LOSS = (-2.1, -1.5)
SLOPE_CUBIC = (-3.15, -2.85)
PSD_EXPONENT_CLOSED = (-6.3, -5.7)
LOSS_CONTRAST = (10.0, 40.0)
LASER_REJECTION = 1e-12
ETA_SQUARED_RATIO = (4 * 0.95, 4 * 1.05)
RIN_REL = 1e-2
SYMPLECTIC = 1e-12
DET_FLOOR = 1 - 1e-12
HERMITIAN_REL = 1e-12
FORMULA_REL = 1e-12

RUNTIME_CLOSED_FORM_S = 5.0
RUNTIME_CONTRAST_S = 10.0
RUNTIME_CONSISTENCY_S = 60.0
