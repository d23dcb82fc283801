"""Spin^c spinor calculus on E(kappa, tau), Berger-sphere spectra and Dirac bounds."""

from .clifford import build_clifford_rep, clifford_mul, two_form_action
from .homogeneous import ModelParams, build_frame_model
from .spinc import build_spinc_connection, killing_solve

__all__ = [
    "ModelParams",
    "build_clifford_rep",
    "build_frame_model",
    "build_spinc_connection",
    "clifford_mul",
    "killing_solve",
    "two_form_action",
]
