from pypolymatrix.conf import PmConf, PmConfError
from pypolymatrix.constraints import ConstraintCheck, ConstraintError
from pypolymatrix.dp_solver import DpSolver, NoCertifiedError, SolverConfig, SolverError, SolverResult
from pypolymatrix.game import GameError, PolymatrixGame, StrategyProfile
from pypolymatrix.oracle import BudgetExceeded, OracleError
from pypolymatrix.reductions.formula import Formula, FormulaError
from pypolymatrix.reductions.gadgets import LabeledGame, ReductionError
from pypolymatrix.treedec.decomp import TreeDecError, TreeDecomposition
from pypolymatrix.treedec.nice import NiceTreeDecomposition
from pypolymatrix.treedec.pace import PaceError
from pypolymatrix.util import PolymatrixError
