"""Time-domain density-matrix dynamics of the driven ladder system.

The state is carried in the rotating frame, so the six slowly varying
components are three real occupations and three complex coherences.  The
equations of motion conserve the total occupation identically; the
integrator is adaptive explicit Runge-Kutta with local error control.

Two decay conventions are provided.  The default ("literal") keeps the
unusual population-damping pattern in which the upper-level loss rate is
Gamma_ab - Gamma_ca while level c is drained at Gamma_ca; the
"standard" mode uses conventional downward relaxation a -> b and a -> c.
Both conserve the trace exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .medium import FieldDrive, LadderSystem

_DECAY_MODES = ("literal", "standard")


class StiffnessError(RuntimeError):
    """Raised when the explicit integrator cannot resolve the dynamics."""


class SingularSteadyStateError(ArithmeticError):
    """Raised when the linear steady-state system is degenerate."""


@dataclass
class DensityMatrixState:
    """Slowly varying density-matrix components.

    Occupations are real; sigma_ab, sigma_bc, sigma_ac are the independent
    coherences (their mirror elements follow by conjugation).
    """

    sigma_aa: float = 0.0
    sigma_bb: float = 1.0
    sigma_cc: float = 0.0
    sigma_ab: complex = 0.0
    sigma_bc: complex = 0.0
    sigma_ac: complex = 0.0

    @classmethod
    def ground(cls) -> "DensityMatrixState":
        """All population in the crystal ground state b."""
        return cls()

    @property
    def trace(self) -> float:
        return self.sigma_aa + self.sigma_bb + self.sigma_cc

    def to_vector(self) -> np.ndarray:
        """Pack into 9 reals for the ODE solver."""
        return np.array([
            self.sigma_aa, self.sigma_bb, self.sigma_cc,
            self.sigma_ab.real, self.sigma_ab.imag,
            self.sigma_bc.real, self.sigma_bc.imag,
            self.sigma_ac.real, self.sigma_ac.imag,
        ])

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "DensityMatrixState":
        return cls(
            sigma_aa=float(y[0]), sigma_bb=float(y[1]), sigma_cc=float(y[2]),
            sigma_ab=complex(y[3], y[4]),
            sigma_bc=complex(y[5], y[6]),
            sigma_ac=complex(y[7], y[8]),
        )


def _rhs_vector(y: np.ndarray, drive: FieldDrive, system: LadderSystem,
                decay_mode: str, literal_ac_coherence: bool) -> np.ndarray:
    om1 = complex(drive.Omega1)
    om2 = complex(drive.Omega2)
    d1, d2 = drive.delta1, drive.delta2
    gab, gbc, gac = system.gamma_ab, system.gamma_bc, system.gamma_ac
    Gab, Gca = system.Gamma_ab, system.Gamma_ca

    saa, sbb, scc = y[0], y[1], y[2]
    sab = complex(y[3], y[4])
    sbc = complex(y[5], y[6])
    sac = complex(y[7], y[8])

    # shared pump terms so the occupation sum cancels exactly
    pump1 = 2.0 * (om1.conjugate() * sab).imag
    pump2 = 2.0 * (om2.conjugate() * sac).imag

    if decay_mode == "literal":
        daa = pump1 + pump2 - (Gab - Gca) * saa
        dcc = -pump2 - Gca * saa
    else:
        daa = pump1 + pump2 - (Gab + Gca) * saa
        dcc = -pump2 + Gca * saa
    dbb = -pump1 + Gab * saa

    dab = -1j * ((d1 - 1j * gab) * sab - om1 * (sbb - saa) - om2 * sbc.conjugate())
    dbc = -1j * ((d2 - d1 - 1j * gbc) * sbc + om2 * sab.conjugate()
                 - om1.conjugate() * sac)
    ac_first = sac.conjugate() if literal_ac_coherence else sac
    dac = -1j * ((d2 - 1j * gac) * ac_first - om2 * (scc - saa) - om1 * sbc)

    return np.array([
        daa, dbb, dcc,
        dab.real, dab.imag,
        dbc.real, dbc.imag,
        dac.real, dac.imag,
    ])


def bloch_rhs(state: DensityMatrixState, drive: FieldDrive, system: LadderSystem,
              decay_mode: str = "literal",
              literal_ac_coherence: bool = False) -> DensityMatrixState:
    """Time derivative of the six density-matrix components.

    ``literal_ac_coherence`` switches the first term of the a-c coherence
    equation to act on the conjugate coherence; the default keeps the
    self-consistent form acting on sigma_ac itself.
    """
    if decay_mode not in _DECAY_MODES:
        raise ValueError(f"decay_mode must be one of {_DECAY_MODES}")
    dy = _rhs_vector(state.to_vector(), drive, system, decay_mode,
                     literal_ac_coherence)
    return DensityMatrixState.from_vector(dy)


@dataclass
class BlochTrajectory:
    """Sampled solution of the time integration."""

    t: np.ndarray
    y: np.ndarray  # shape (9, n_samples), packed as in DensityMatrixState

    @property
    def trace(self) -> np.ndarray:
        return self.y[0] + self.y[1] + self.y[2]

    @property
    def sigma_ab(self) -> np.ndarray:
        return self.y[3] + 1j * self.y[4]

    @property
    def sigma_bb(self) -> np.ndarray:
        return self.y[1]

    def state(self, index: int = -1) -> DensityMatrixState:
        return DensityMatrixState.from_vector(self.y[:, index])


# beyond this many characteristic periods the explicit solver is hopeless
_MAX_RATE_TIME_PRODUCT = 5e8


def integrate_bloch(initial: DensityMatrixState, drive: FieldDrive,
                    system: LadderSystem, T: float,
                    rtol: float = 1e-9, atol: float = 1e-12,
                    t_eval=None, decay_mode: str = "literal",
                    literal_ac_coherence: bool = False) -> BlochTrajectory:
    """Integrate the full six-component dynamics from 0 to T.

    Uses an adaptive embedded Runge-Kutta pair (DOP853) on the packed real
    state.  A problem whose fastest rate times T exceeds the explicit
    stability budget raises :class:`StiffnessError` up front; the same
    error is raised if the step control fails mid-run.
    """
    if T <= 0:
        raise ValueError("integration time T must be positive")
    if decay_mode not in _DECAY_MODES:
        raise ValueError(f"decay_mode must be one of {_DECAY_MODES}")

    fastest = max(system.gamma_ab, system.gamma_bc, system.gamma_ac,
                  system.Gamma_ab, system.Gamma_ca,
                  abs(drive.Omega1), abs(drive.Omega2),
                  abs(drive.delta1), abs(drive.delta2))
    if fastest * T > _MAX_RATE_TIME_PRODUCT:
        raise StiffnessError(
            f"rate*T = {fastest * T:.3g} exceeds the explicit-integrator "
            "budget; reduce the damping-time product or use an implicit solver"
        )

    sol = solve_ivp(
        lambda t, y: _rhs_vector(y, drive, system, decay_mode,
                                 literal_ac_coherence),
        (0.0, T),
        initial.to_vector(),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=t_eval,
        dense_output=False,
    )
    if not sol.success:
        raise StiffnessError(
            f"integration failed ({sol.message}); reduce the damping-step "
            "product or fall back to an implicit solver"
        )
    return BlochTrajectory(t=sol.t, y=sol.y)


def _linear_matrix(drive: FieldDrive, system: LadderSystem) -> np.ndarray:
    """Coefficient matrix of the first-order probe response.

    Acting on (sigma_ab, sigma_cb): i d/dt v = M v - (Omega1, 0).
    """
    om2 = complex(drive.Omega2)
    return np.array([
        [drive.delta1 - 1j * system.gamma_ab, -om2],
        [-om2.conjugate(), drive.delta1 - drive.delta2 - 1j * system.gamma_bc],
    ])


def steady_state_linearized(drive: FieldDrive,
                            system: LadderSystem) -> tuple[complex, complex]:
    """Closed-form steady state of the first-order probe equations.

    Returns (sigma_ab, sigma_bc).  The response is linear in Omega1.
    Raises :class:`SingularSteadyStateError` when the two-photon
    denominator (delta1 - i gamma_ab)(delta1 - delta2 - i gamma_bc)
    - |Omega2|^2 vanishes, which needs both dampings to be zero.
    """
    m = _linear_matrix(drive, system)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det == 0:
        raise SingularSteadyStateError(
            "(delta1 - i*gamma_ab)(delta1 - delta2 - i*gamma_bc) = |Omega2|^2: "
            "the steady-state system is degenerate"
        )
    om1 = complex(drive.Omega1)
    sigma_ab = om1 * m[1, 1] / det
    sigma_cb = -m[1, 0] * om1 / det
    return complex(sigma_ab), complex(sigma_cb).conjugate()


def integrate_linearized(drive: FieldDrive, system: LadderSystem, T: float,
                         initial: tuple[complex, complex] = (0.0, 0.0),
                         rtol: float = 1e-10, atol: float = 1e-16,
                         t_eval=None):
    """Integrate the first-order probe equations from 0 to T.

    ``initial`` is (sigma_ab, sigma_cb) at t = 0.  Returns the solve_ivp
    solution on the packed real view; the final coherences are in
    ``final_sigma_ab`` / ``final_sigma_bc`` attributes of the return value.
    """
    if T <= 0:
        raise ValueError("integration time T must be positive")
    m = _linear_matrix(drive, system)
    om1 = complex(drive.Omega1)

    def rhs(t, y):
        v = np.array([y[0] + 1j * y[1], y[2] + 1j * y[3]])
        dv = -1j * (m @ v - np.array([om1, 0.0]))
        return np.array([dv[0].real, dv[0].imag, dv[1].real, dv[1].imag])

    y0 = np.array([
        complex(initial[0]).real, complex(initial[0]).imag,
        complex(initial[1]).real, complex(initial[1]).imag,
    ])
    sol = solve_ivp(rhs, (0.0, T), y0, method="DOP853",
                    rtol=rtol, atol=atol, t_eval=t_eval)
    if not sol.success:
        raise StiffnessError(f"linearized integration failed ({sol.message})")
    sol.final_sigma_ab = complex(sol.y[0, -1], sol.y[1, -1])
    sol.final_sigma_bc = complex(sol.y[2, -1], -sol.y[3, -1])
    return sol
