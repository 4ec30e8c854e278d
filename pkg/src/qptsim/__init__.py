"""Few-qubit ultrastrong-coupling circuit QED: circuit parameters, exact
diagonalisation, effective theories and phase-diagram scans."""
from .errors import (ConvergenceError, DegeneracyError, NumericalError, QptsimError,
                     ValidationError)
from .models import FrameSpec, LAB_FRAME, ModelParams, build
from .effective import Couplings, PhaseLabel
from .scan import GridSpec, scan_grid, spectrum

__version__ = "0.1.0"
