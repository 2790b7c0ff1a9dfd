"""Truncated Fock-space states: construction, photon addition, parity.

States live in the number basis |0>, ..., |D-1>.  Constructors either
take an explicit dimension or auto-size it so the neglected tail
population stays below ``TRUNCATION_TOL``; evolution code elsewhere
re-checks tail growth instead of silently truncating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionError, DomainError, SpecParseError, TruncationError

TRUNCATION_TOL = 1e-10
DEFAULT_DIM_CAP = 512

_NORM_TOL = 1e-12
_HERM_TOL = 1e-12
_TRACE_TOL = 1e-10


# ---------------------------------------------------------------------------
# state containers
# ---------------------------------------------------------------------------

def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockState:
    """A normalized pure state, ``amplitudes[l]`` on Fock level l."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _readonly(np.asarray(self.amplitudes, dtype=complex))
        if amps.ndim != 1 or amps.size == 0:
            raise DimensionError("amplitudes must be a nonempty 1-d vector")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > _NORM_TOL:
            raise DomainError(f"state not normalized: sum |a_l|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_photon_number(self) -> float:
        return float(np.dot(np.arange(self.dim), self.probabilities()))

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, unit-trace matrix in the truncated Fock basis."""

    entries: np.ndarray

    def __post_init__(self):
        rho = _readonly(np.asarray(self.entries, dtype=complex))
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise DimensionError("density matrix must be square and nonempty")
        herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
        if herm_dev > _HERM_TOL:
            raise DomainError(f"density matrix not Hermitian: max deviation {herm_dev:g}")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise DomainError(f"density matrix trace {tr!r} != 1")
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    def mean_photon_number(self) -> float:
        return float(np.dot(np.arange(self.dim), self.populations()))


def as_density(state: Union[FockState, DensityMatrix]) -> DensityMatrix:
    return state.to_density() if isinstance(state, FockState) else state


# ---------------------------------------------------------------------------
# declarative state specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fock:
    l: int

    def __post_init__(self):
        if not (isinstance(self.l, int) and self.l >= 0):
            raise DomainError(f"Fock level must be an integer >= 0, got {self.l!r}")


@dataclass(frozen=True)
class Coherent:
    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))


@dataclass(frozen=True)
class Thermal:
    nbar: float

    def __post_init__(self):
        if not (float(self.nbar) >= 0.0):
            raise DomainError(f"thermal occupation must be >= 0, got {self.nbar!r}")
        object.__setattr__(self, "nbar", float(self.nbar))


@dataclass(frozen=True)
class Binomial:
    eta: float
    M: int

    def __post_init__(self):
        if not (0.0 <= float(self.eta) <= 1.0):
            raise DomainError(f"eta must lie in [0, 1], got {self.eta!r}")
        if not (isinstance(self.M, int) and self.M >= 0):
            raise DomainError(f"M must be an integer >= 0, got {self.M!r}")
        object.__setattr__(self, "eta", float(self.eta))


@dataclass(frozen=True)
class PhotonAdded:
    k: int
    base: "StateSpec"

    def __post_init__(self):
        if not (isinstance(self.k, int) and self.k >= 1):
            raise DomainError(f"photon-addition order k must be an integer >= 1, got {self.k!r}")
        if isinstance(self.base, PhotonAdded):
            raise DomainError("photon-added wrapper cannot nest above another photon-added spec")


StateSpec = Union[Fock, Coherent, Thermal, Binomial, PhotonAdded]

_FAMILY_KEYS = {
    "fock": {"l"},
    "coherent": {"alpha"},
    "thermal": {"nbar"},
    "binomial": {"eta", "M"},
    "ecs": {"k", "alpha"},
    "ebs": {"k", "eta", "M"},
    "ets": {"k", "nbar"},
}


def _parse_value(key: str, raw: str, pos: int):
    try:
        if key in ("l", "k", "M"):
            return int(raw)
        if key == "alpha":
            return complex(raw)
        return float(raw)
    except ValueError:
        raise SpecParseError(f"cannot parse value {raw!r} for key '{key}'", pos) from None


def parse_state_spec(text: str) -> StateSpec:
    """Parse the flat ``family key=value ...`` mini-language.

    Families: fock, coherent, thermal, binomial and the photon-added
    wrappers ecs, ebs, ets (k defaults to 1).  Example: ``ebs k=1
    eta=0.5 M=2``.
    """
    tokens = []
    i = 0
    for part in text.split(" "):
        if part:
            tokens.append((part, i))
        i += len(part) + 1
    if not tokens:
        raise SpecParseError("empty state spec", 0)
    family, fpos = tokens[0]
    family = family.lower()
    if family not in _FAMILY_KEYS:
        raise SpecParseError(
            f"unknown state family {family!r}; expected one of {sorted(_FAMILY_KEYS)}", fpos)
    allowed = _FAMILY_KEYS[family]
    kv = {}
    for tok, pos in tokens[1:]:
        if "=" not in tok:
            raise SpecParseError(f"expected key=value, got {tok!r}", pos)
        key, _, raw = tok.partition("=")
        if key not in allowed:
            raise SpecParseError(f"unknown key {key!r} for family '{family}'", pos)
        if key in kv:
            raise SpecParseError(f"duplicate key {key!r}", pos)
        kv[key] = _parse_value(key, raw, pos + len(key) + 1)
    missing = allowed - set(kv) - {"k"}
    if missing:
        raise SpecParseError(
            f"family '{family}' is missing key(s) {sorted(missing)}", fpos)
    try:
        if family == "fock":
            return Fock(kv["l"])
        if family == "coherent":
            return Coherent(kv["alpha"])
        if family == "thermal":
            return Thermal(kv["nbar"])
        if family == "binomial":
            return Binomial(kv["eta"], kv["M"])
        k = kv.get("k", 1)
        if family == "ecs":
            return PhotonAdded(k, Coherent(kv["alpha"]))
        if family == "ebs":
            return PhotonAdded(k, Binomial(kv["eta"], kv["M"]))
        return PhotonAdded(k, Thermal(kv["nbar"]))
    except DomainError as exc:
        raise SpecParseError(str(exc), fpos) from None


def format_state_spec(spec: StateSpec) -> str:
    """Canonical text form of a spec (inverse of parse_state_spec)."""
    if isinstance(spec, Fock):
        return f"fock l={spec.l}"
    if isinstance(spec, Coherent):
        a = spec.alpha
        astr = repr(a.real) if a.imag == 0.0 else repr(a).strip("()")
        return f"coherent alpha={astr}"
    if isinstance(spec, Thermal):
        return f"thermal nbar={spec.nbar!r}"
    if isinstance(spec, Binomial):
        return f"binomial eta={spec.eta!r} M={spec.M}"
    base = spec.base
    if isinstance(base, Coherent):
        a = base.alpha
        astr = repr(a.real) if a.imag == 0.0 else repr(a).strip("()")
        return f"ecs k={spec.k} alpha={astr}"
    if isinstance(base, Binomial):
        return f"ebs k={spec.k} eta={base.eta!r} M={base.M}"
    if isinstance(base, Thermal):
        return f"ets k={spec.k} nbar={base.nbar!r}"
    return f"fock l={base.l + spec.k}"  # added Fock state is again a Fock state


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def build_binomial(eta: float, M: int, dim: int | None = None) -> FockState:
    """Binomial state: amplitude sqrt(C(M,l)) eta^l (1-eta^2)^((M-l)/2) on l<=M.

    Normalized exactly by the binomial theorem.  eta=0 gives |0>,
    eta=1 gives |M>.
    """
    if not (0.0 <= eta <= 1.0):
        raise DomainError(f"eta must lie in [0, 1], got {eta!r}")
    if M < 0:
        raise DomainError(f"M must be >= 0, got {M!r}")
    if dim is None:
        dim = M + 1
    if dim < M + 1:
        raise DimensionError(f"dim {dim} too small for binomial state with M={M}")
    amps = np.zeros(dim, dtype=complex)
    x = eta * eta
    for l in range(M + 1):
        amps[l] = math.sqrt(math.comb(M, l)) * eta**l * (1.0 - x) ** ((M - l) / 2.0)
    nrm = np.linalg.norm(amps)
    return FockState(amps / nrm)


def build_coherent(alpha: complex, dim: int | None = None,
                   dim_cap: int = DEFAULT_DIM_CAP) -> FockState:
    """Coherent state with amplitudes e^{-|a|^2/2} a^l / sqrt(l!).

    Auto-sizes the dimension so the discarded Poisson tail stays below
    TRUNCATION_TOL.
    """
    alpha = complex(alpha)
    a2 = abs(alpha) ** 2
    # amplitude recurrence avoids factorial overflow
    def amps_upto(d: int) -> np.ndarray:
        out = np.empty(d, dtype=complex)
        out[0] = math.exp(-a2 / 2.0)
        for l in range(1, d):
            out[l] = out[l - 1] * alpha / math.sqrt(l)
        return out

    if dim is not None:
        if dim < 1:
            raise DimensionError("dim must be >= 1")
        amps = amps_upto(dim)
        tail = 1.0 - float(np.sum(np.abs(amps) ** 2))
        if tail > TRUNCATION_TOL or abs(amps[-1]) ** 2 > TRUNCATION_TOL:
            raise TruncationError(
                f"dim {dim} leaves coherent-state tail {tail:.3g} above tolerance")
        return FockState(amps / np.linalg.norm(amps))

    d = max(8, int(a2) + 2)
    while d <= dim_cap:
        amps = amps_upto(d)
        tail = 1.0 - float(np.sum(np.abs(amps) ** 2))
        if d > a2 and abs(amps[-1]) ** 2 < TRUNCATION_TOL and tail < TRUNCATION_TOL:
            return FockState(amps / np.linalg.norm(amps))
        d = min(2 * d, dim_cap) if d < dim_cap else dim_cap + 1
    raise TruncationError(
        f"coherent state |alpha|={abs(alpha):g} does not fit below the cap {dim_cap}")


def thermal_populations(nbar: float, dim: int | None = None,
                        dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Geometric populations nbar^l/(1+nbar)^(l+1); tail below tolerance."""
    if nbar < 0:
        raise DomainError(f"nbar must be >= 0, got {nbar!r}")
    if nbar == 0.0:
        pops = np.zeros(dim if dim is not None else 1)
        pops[0] = 1.0
        return pops
    q = nbar / (1.0 + nbar)
    if dim is None:
        # closed-form tail: sum_{l>=D} p_l = q^D
        d = max(4, int(math.ceil(math.log(TRUNCATION_TOL) / math.log(q))) + 1)
        if d > dim_cap:
            raise TruncationError(
                f"thermal state nbar={nbar:g} does not fit below the cap {dim_cap}")
        dim = d
    pops = q ** np.arange(dim) / (1.0 + nbar)
    if q**dim > TRUNCATION_TOL:
        raise TruncationError(f"dim {dim} leaves thermal tail {q**dim:.3g} above tolerance")
    return pops


def build_fock(l: int, dim: int | None = None) -> FockState:
    if l < 0:
        raise DomainError(f"Fock level must be >= 0, got {l!r}")
    if dim is None:
        dim = l + 1
    if dim < l + 1:
        raise DimensionError(f"dim {dim} too small for |{l}>")
    amps = np.zeros(dim, dtype=complex)
    amps[l] = 1.0
    return FockState(amps)


# ---------------------------------------------------------------------------
# photon addition
# ---------------------------------------------------------------------------

def photon_add(state: FockState, k: int, dim: int | None = None) -> FockState:
    """Normalized a^{dagger k}|psi>: amplitude shifts up k levels.

    amplitude'[l+k] = amplitude[l] * sqrt((l+1)(l+2)...(l+k)) / norm.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k!r}")
    need = state.dim + k
    if dim is None:
        dim = need
    if dim < need:
        raise DimensionError(f"dim {dim} too small: photon addition needs {need}")
    amps = np.zeros(dim, dtype=complex)
    l = np.arange(state.dim, dtype=float)
    weight = np.ones(state.dim)
    for j in range(1, k + 1):
        weight *= l + j
    amps[k:k + state.dim] = state.amplitudes * np.sqrt(weight)
    return FockState(amps / np.linalg.norm(amps))


def photon_add_density(rho: DensityMatrix, k: int, dim: int | None = None) -> DensityMatrix:
    """Normalized a^{dagger k} rho a^k for a general (possibly mixed) state."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k!r}")
    need = rho.dim + k
    if dim is None:
        dim = need
    if dim < need:
        raise DimensionError(f"dim {dim} too small: photon addition needs {need}")
    l = np.arange(rho.dim, dtype=float)
    weight = np.ones(rho.dim)
    for j in range(1, k + 1):
        weight *= l + j
    w = np.sqrt(weight)
    out = np.zeros((dim, dim), dtype=complex)
    out[k:k + rho.dim, k:k + rho.dim] = rho.entries * np.outer(w, w)
    tr = float(np.real(np.trace(out)))
    return DensityMatrix(out / tr)


# ---------------------------------------------------------------------------
# excited-binomial normalization and the terminating hypergeometric sum
# ---------------------------------------------------------------------------

def hyp2f1_terminating(a: int, b: int, c: float, x: float) -> float:
    """2F1(a, b; c; x) as the exact finite Pochhammer sum, a a nonpositive integer.

    The series terminates after -a+1 terms; raises if (c)_j hits a pole
    inside the summation range.
    """
    if not float(a).is_integer() or a > 0:
        raise DomainError(f"a must be a nonpositive integer, got {a!r}")
    m = int(-a)
    if float(c).is_integer() and -m < c <= 0:
        raise DomainError(f"(c)_j has a pole inside the terminating sum: c={c!r}, a={a!r}")
    total = 1.0
    term = 1.0
    for j in range(m):
        term *= (a + j) * (b + j) / ((c + j) * (j + 1.0)) * x
        total += term
    return total


def excited_binomial_normalization(k: int, eta: float, M: int) -> float:
    """Normalization constant of the photon-added binomial state.

    Equals [eta^{2M} (M+k)!/M! 2F1(-M,-M;-M-k;(eta^2-1)/eta^2)]^{-1/2}.
    At eta=0 that argument diverges, but the state limit is |0>, so the
    value is the removable-singularity limit 1/sqrt(k!).
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k!r}")
    if not (0.0 <= eta <= 1.0):
        raise DomainError(f"eta must lie in [0, 1], got {eta!r}")
    if M < 0:
        raise DomainError(f"M must be >= 0, got {M!r}")
    if eta == 0.0 or M == 0:
        return 1.0 / math.sqrt(math.factorial(k))
    x = (eta * eta - 1.0) / (eta * eta)
    f = hyp2f1_terminating(-M, -M, float(-M - k), x)
    value = eta ** (2 * M) * (math.factorial(M + k) / math.factorial(M)) * f
    return value ** -0.5


# ---------------------------------------------------------------------------
# build_state dispatch
# ---------------------------------------------------------------------------

def build_pure_state(spec: StateSpec, dim: int | None = None,
                     dim_cap: int = DEFAULT_DIM_CAP) -> FockState:
    """Build the pure-state specs (everything except a thermal base)."""
    if isinstance(spec, Fock):
        return build_fock(spec.l, dim)
    if isinstance(spec, Coherent):
        return build_coherent(spec.alpha, dim, dim_cap)
    if isinstance(spec, Binomial):
        return build_binomial(spec.eta, spec.M, dim)
    if isinstance(spec, PhotonAdded):
        if isinstance(spec.base, Thermal):
            raise DomainError("photon-added thermal state is mixed; use build_state")
        base = build_pure_state(spec.base, None, dim_cap)
        return photon_add(base, spec.k, dim)
    raise DomainError("thermal state is mixed; use build_state")


def build_state(spec: StateSpec, dim: int | None = None,
                dim_cap: int = DEFAULT_DIM_CAP) -> DensityMatrix:
    """Build any spec as a DensityMatrix (rank-1 for pure specs)."""
    if isinstance(spec, Thermal):
        pops = thermal_populations(spec.nbar, dim, dim_cap)
        return DensityMatrix(np.diag(pops / np.sum(pops)).astype(complex))
    if isinstance(spec, PhotonAdded) and isinstance(spec.base, Thermal):
        nbar = spec.base.nbar
        if nbar == 0.0:
            return build_fock(spec.k, dim).to_density()  # adding photons to vacuum
        # grow the base until the excited state's own tail passes tolerance
        q = nbar / (1.0 + nbar)
        d = thermal_populations(nbar, None, dim_cap).size
        while True:
            if d + spec.k > dim_cap and dim is None:
                raise TruncationError(
                    f"photon-added thermal nbar={nbar:g} does not fit below the cap {dim_cap}")
            base = DensityMatrix(np.diag(thermal_populations(nbar, d)).astype(complex))
            rho = photon_add_density(base, spec.k, dim)
            tail = rho.populations()[-1]
            remainder = tail * q / (1.0 - q)
            if tail < TRUNCATION_TOL and remainder < TRUNCATION_TOL:
                return rho
            if dim is not None:
                raise TruncationError(
                    f"dim {dim} leaves photon-added-thermal tail {tail:.3g} above tolerance")
            d += 8
    return build_pure_state(spec, dim, dim_cap).to_density()


# ---------------------------------------------------------------------------
# parity
# ---------------------------------------------------------------------------

def mean_parity(state: Union[FockState, DensityMatrix]) -> float:
    """Expectation of the photon-number parity, sum_l (-1)^l rho_ll.

    The Wigner function at the phase-space origin is (2/pi) times this.
    """
    rho = as_density(state)
    signs = np.where(np.arange(rho.dim) % 2 == 0, 1.0, -1.0)
    return float(np.dot(signs, rho.populations()))


def ebs_parity_numerator_coeffs(k: int, M: int) -> list[int]:
    """Exact integer coefficients (in x = eta^2) of the initial-parity numerator.

    The mean parity of the k-photon-added binomial state is
    N(x) / D(x) with N(x) = sum_l (-1)^(l+k) (l+1)...(l+k) C(M,l) x^l (1-x)^(M-l)
    and D(x) the same sum without the alternating sign.
    """
    if k < 1 or M < 0:
        raise DomainError("need k >= 1 and M >= 0")
    coeffs = [0] * (M + 1)
    for l in range(M + 1):
        ff = 1
        for j in range(1, k + 1):
            ff *= l + j
        pref = (-1) ** (l + k) * ff * math.comb(M, l)
        for j in range(M - l + 1):  # expand (1-x)^(M-l)
            coeffs[l + j] += pref * math.comb(M - l, j) * (-1) ** j
    return coeffs


def single_photon_ebs_parity(M: int, eta: float) -> float:
    """Closed polynomial oracle for the k=1 EBS initial parity, f_M(x)/(1+Mx)."""
    x = eta * eta
    coeffs = ebs_parity_numerator_coeffs(1, M)
    f = 0.0
    for d in range(M, -1, -1):
        f = f * x + coeffs[d]
    return f / (1.0 + M * x)
