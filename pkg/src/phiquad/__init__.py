"""Phi-function actions of Kronecker sums by quadrature, and exponential
Runge-Kutta integrators built on them."""

from .bounds import CostModel, QuadraturePlan, quaderr, quadnodes, setup_quadrature
from .integrators import (ExpRKTableau, PhiEvaluator, SemilinearProblem, integrate, step_erk,
                          step_exp_euler, tableau)
from .kron import KroneckerSum, assemble_dense, exp_action, matvec
from .oracle import phi_dense_oracle
from .phiaction import ConvergenceError, PhiRequest, phi_adaptive, phi_fixed, phiquadmv
from .quadrature import RuleKind, clenshaw_curtis, gauss_legendre

__all__ = [
    "ConvergenceError", "CostModel", "ExpRKTableau", "KroneckerSum", "PhiEvaluator",
    "PhiRequest", "QuadraturePlan", "RuleKind", "SemilinearProblem", "assemble_dense",
    "clenshaw_curtis", "exp_action", "gauss_legendre", "integrate", "matvec", "phi_adaptive",
    "phi_dense_oracle", "phi_fixed", "phiquadmv", "quaderr", "quadnodes", "setup_quadrature",
    "step_erk", "step_exp_euler", "tableau",
]
