"""Numerical laboratory for Hardy--Littlewood and Bohnenblust--Hille type inequalities."""

from hllab.errors import DomainError, NumericError
from hllab.exponents import Regime, RegimeReport, SpaceSignature, classify, lambda_of
from hllab.norms import NormEstimate, NormProblem, norm_ascent, norm_vertex_exact
from hllab.tensorlab import CoeffTensor, MixedNormSpec, apply, mixed_norm, p_norm

__version__ = "0.1.0"
