"""Explicit constants and inequalities relating harmonic, comass and Gromov norms.

Every evaluator is a pure function of its inputs. ``verify_report`` assembles
the inequalities that stay valid when the Gromov norm is replaced by a computed
upper bound (the simplicial l1 value) or lower bound (the straightening bound).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Literal, Mapping

import numpy as np
from scipy import integrate

from . import kernels
from .complex import ComplexError
from .metric import MetricComplex

CASES = ("negatively_curved", "higher_rank_symmetric", "rank_one_Ric_k", "generic")
FORMULA_RTOL = 1e-7
DISCRETE_RTOL = 0.05
CHEEGER_MAX_CELLS = 26

DEFAULT_CONSTANTS = {
    "C_n": 1.0,          # dimensional constant in the comass and general estimates
    "C_margulis": 1.0,   # counting constant in the Margulis lemma
    "C1_moser": 1.0,
    "C2_moser": 1.0,
    "C_cheng": 1.0,
    "C_croke": 1.0,
}


class DescriptorError(ValueError):
    pass


# ---------------------------------------------------------------- curvature


def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {pq: i for i, pq in enumerate((i, j) for i in range(n) for j in range(i + 1, n))}


def ricci_from_curvature_operator(R: np.ndarray, n: int) -> np.ndarray:
    """Ricci form Ric(e_i, e_k) = sum_j <R(e_i ^ e_j), e_k ^ e_j>."""
    idx = _pair_index(n)
    Ric = np.zeros((n, n))
    for i in range(n):
        for k in range(n):
            for j in range(n):
                if j in (i, k):
                    continue
                si, ii = (1, idx[(i, j)]) if i < j else (-1, idx[(j, i)])
                sk, kk = (1, idx[(k, j)]) if k < j else (-1, idx[(j, k)])
                Ric[i, k] += si * sk * R[ii, kk]
    return Ric


def _check_symmetric(R: np.ndarray, size: int, what: str) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (size, size):
        raise ValueError(f"{what} must be {size}x{size}, got shape {R.shape}")
    if not np.allclose(R, R.T, atol=1e-12):
        raise ValueError(f"{what} must be symmetric")
    return R


def kp_from_curvature_operator(R: np.ndarray | None, p: int, n: int, *,
                               ricci: np.ndarray | None = None) -> float:
    """K_p: 0 for p = 0, scaled Ricci lower bound for p = 1, else min eig of R.

    R is the curvature operator on Lambda^2 R^n in the basis e_i ^ e_j (i < j),
    with the convention that constant curvature -1 gives R = -identity. For
    p = 1 a Ricci form may be passed as ``ricci`` instead.
    """
    if not 0 <= p <= n:
        raise ValueError(f"degree {p} out of range for dimension {n}")
    if p == 0:
        return 0.0
    if p == 1:
        if ricci is None:
            if R is None:
                raise ValueError("need a curvature operator or a Ricci form")
            Rm = _check_symmetric(R, math.comb(n, 2), "curvature operator")
            ricci = ricci_from_curvature_operator(Rm, n)
        Ric = _check_symmetric(ricci, n, "Ricci form")
        if n < 2:
            raise ValueError("Ricci curvature needs n >= 2")
        return float(np.linalg.eigvalsh(Ric)[0] / (n - 1))
    if R is None:
        raise ValueError("p >= 2 needs the curvature operator")
    Rm = _check_symmetric(R, math.comb(n, 2), "curvature operator")
    return float(np.linalg.eigvalsh(Rm)[0])


def ric_k(Ru: np.ndarray, k: int) -> float:
    """Supremum over k-planes of the trace of R(u, ., u, .): the k largest eigenvalues."""
    Ru = np.asarray(Ru, dtype=float)
    n = Ru.shape[0]
    _check_symmetric(Ru, n, "directional curvature form")
    if not 1 <= k <= n:
        raise ValueError(f"k = {k} out of range 1..{n}")
    return float(np.linalg.eigvalsh(Ru)[::-1][:k].sum())


def li_lambda(n: int, p: int, K_p: float) -> float:
    """lambda = -p (n - p) K_p, the shift making |omega|_2 a subsolution."""
    return -p * (n - p) * K_p


# ---------------------------------------------------------------- case tags


@dataclass(frozen=True)
class CaseTag:
    """Geometric case. ``k`` is the index with Ric_k < 0 for the rank-one case."""

    kind: str
    rank: int | None = None
    srk: int | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in CASES:
            raise DescriptorError(f"unknown case_tag {self.kind!r}; expected one of {CASES}")
        if self.kind == "higher_rank_symmetric" and (self.rank is None or self.srk is None):
            raise DescriptorError("higher_rank_symmetric needs 'rank' and 'srk'")
        if self.kind == "rank_one_Ric_k" and (self.k is None or self.k < 2):
            raise DescriptorError("rank_one_Ric_k needs an integer 'k' >= 2")

    def ell(self, n: int) -> int:
        """Exponent of the injectivity radius in the comass estimate."""
        return {"negatively_curved": 1, "higher_rank_symmetric": self.rank,
                "rank_one_Ric_k": (self.k or 0) - 1, "generic": n}[self.kind]

    @classmethod
    def parse(cls, obj: str | Mapping[str, Any] | "CaseTag") -> "CaseTag":
        if isinstance(obj, CaseTag):
            return obj
        if isinstance(obj, str):
            return cls(obj)
        if not isinstance(obj, Mapping) or "kind" not in obj:
            raise DescriptorError("case_tag must be a string or an object with 'kind'")
        extra = set(obj) - {"kind", "rank", "srk", "k"}
        if extra:
            raise DescriptorError(f"unknown case_tag keys: {sorted(extra)}")
        return cls(obj["kind"], obj.get("rank"), obj.get("srk"), obj.get("k"))

    def to_json(self) -> str | dict:
        if self.kind in ("negatively_curved", "generic"):
            return self.kind
        return {k: v for k, v in asdict(self).items() if v is not None}


def margulis_count(case: CaseTag | str, mu: float, inj: float, n: int, C: float = 1.0) -> float:
    """Bound on the number of fundamental domains meeting a mu/2 ball.

    eps = min(inj, mu/2). The negatively curved case uses C = 1.
    """
    case = CaseTag.parse(case)
    if mu <= 0 or inj <= 0:
        raise ValueError("mu and inj must be positive")
    if C < 1:
        raise ValueError("the counting constant C must be >= 1")
    ratio = mu / min(inj, mu / 2)
    if case.kind == "negatively_curved":
        return ratio
    return C * ratio ** case.ell(n)


def moser_rhs(n: int, K: float, lam: float, r: float, vol_ball: float, norm2_f: float,
              C1: float = 1.0, C2: float = 1.0) -> float:
    """Moser-type mean value bound for subsolutions of Delta - lambda."""
    if vol_ball <= 0:
        raise ValueError("ball volume must be positive")
    if min(K, lam, r) < 0:
        raise ValueError("K, lambda and r must be nonnegative")
    return (C1 * (1 + lam * r * r) ** (0.5 + n / 4) * math.exp(C2 * math.sqrt((n - 1) * K) * r)
            * norm2_f / math.sqrt(vol_ball))


def comass_harmonic_rhs(case: CaseTag | str, n: int, b_p: float, inj: float, C: float = 1.0) -> float:
    """C b_p^{(n - l)/2} / inj^{l/2}, the comass-to-harmonic-norm ratio bound."""
    case = CaseTag.parse(case)
    if b_p <= 0 or inj <= 0:
        raise ValueError("b_p and inj must be positive")
    ell = case.ell(n)
    return C * b_p ** ((n - ell) / 2) * inj ** (-ell / 2)


def thm_upper_rhs(n: int, p: int, vol: float, harmonic_norm: float) -> float:
    """(n - p)! (n - 1)^{n - p} sqrt(vol) ||beta||_H, bounding ||beta*||_1."""
    if not 0 <= p <= n:
        raise ValueError(f"degree {p} out of range for dimension {n}")
    return math.factorial(n - p) * (n - 1) ** (n - p) * math.sqrt(vol) * harmonic_norm


def thm_lower_hypothesis(case: CaseTag | str, n: int, p: int) -> str | None:
    """Reason the general estimate does not apply, or None if it does."""
    case = CaseTag.parse(case)
    if n < 3:
        return "needs n >= 3"
    if case.kind == "negatively_curved":
        return None if p <= n - 2 else "needs p <= n-2"
    if case.kind == "higher_rank_symmetric":
        if case.rank < 2:
            return "needs real rank >= 2"
        return None if p <= n - 2 - case.srk else "needs p <= n-2-srk"
    if case.kind == "rank_one_Ric_k":
        kk = case.k - 1
        if kk > n // 4:
            return "needs Ric_{k+1} < 0 with k <= floor(n/4)"
        return None if p <= n - 4 * kk else "needs p <= n-4k"
    return "no straightening bound in the generic case"


def thm_lower_const(case: CaseTag | str, n: int, p: int, b_p: float, a: float, inj: float,
                    C: float = 1.0) -> float | None:
    """Coefficient c with ||beta||_H <= c ||beta*||_1, or None if not applicable.

    Negatively curved: C(n) b_p^{(n-1)/2} a^{p-n} / inj^{1/2}. The other cases
    have an unspecified constant C and return C / inj^{l/2}.
    """
    case = CaseTag.parse(case)
    if thm_lower_hypothesis(case, n, p) is not None:
        return None
    if inj <= 0:
        raise ValueError("inj must be positive")
    if case.kind == "negatively_curved":
        if a <= 0 or b_p <= 0:
            raise ValueError("the negatively curved constant needs a > 0 and b_p > 0")
        return C * b_p ** ((n - 1) / 2) * a ** (p - n) / math.sqrt(inj)
    ell = case.rank if case.kind == "higher_rank_symmetric" else case.k - 1
    return C / inj ** (ell / 2)


GromovMode = Literal["l1_by_mass", "comass_by_linf", "mass_by_l1", "linf_by_comass", "comass_lemma"]


def gromov_mass_comass(n: int, p: int, a: float = 1.0, mode: GromovMode = "l1_by_mass") -> float:
    """Multipliers between l1 / mass and l-infinity / comass.

    ``l1_by_mass``, ``comass_by_linf`` and ``comass_lemma`` give p!(n-1)^p
    (Ricci >= -(n-1)); ``mass_by_l1`` and ``linf_by_comass`` give
    pi a^{-p}/(p-1)! (sectional curvature <= -a^2).
    """
    if mode in ("l1_by_mass", "comass_by_linf", "comass_lemma"):
        return float(math.factorial(p) * (n - 1) ** p)
    if mode in ("mass_by_l1", "linf_by_comass"):
        if p < 1:
            raise ValueError("the (p-1)! multiplier needs p >= 1")
        if a <= 0:
            raise ValueError("curvature scale a must be positive")
        return math.pi * a ** (-p) / math.factorial(p - 1)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------- explicit constants


@dataclass(frozen=True)
class SobolevChain:
    C1_bounds: tuple[float, float]
    C0_bounds: tuple[float, float]
    CS_value: float | tuple[float, float] | None


def sobolev_chain(n: int, vol: float | None = None, *, h: float | None = None,
                  C1: float | None = None, C0: float | None = None,
                  include_cs: bool = True) -> SobolevChain:
    """Propagate C1 <= C0 <= 2 C1, C1 <= h^n vol / 2 and the L2-Sobolev constant.

    Intervals are closed; a lower end of 0 means no lower bound is known.
    """
    if h is None and C1 is None and C0 is None:
        raise ValueError("need at least one of h, C1, C0")
    if include_cs and n < 3:
        raise ValueError("the L2-Sobolev constant needs n >= 3")
    lo1, hi1 = 0.0, math.inf
    if C1 is not None:
        lo1, hi1 = C1, C1
    if h is not None:
        if vol is None:
            raise ValueError("the isoperimetric bound needs vol")
        hi1 = min(hi1, h ** n * vol / 2)
    if C0 is not None:
        lo1, hi1 = max(lo1, C0 / 2), min(hi1, C0)
    lo0, hi0 = (C0, C0) if C0 is not None else (lo1, 2 * hi1)
    if lo1 > hi1 * (1 + 1e-12) or lo0 > hi0 * (1 + 1e-12):
        raise ValueError("inconsistent Sobolev inputs")
    cs: float | tuple[float, float] | None = None
    if include_cs:
        f = lambda c: (2 * (n - 1) / (n - 2)) ** (2 / n) * c ** (2 / n)
        cs = f(lo0) if lo0 == hi0 else (f(lo0), f(hi0))
    return SobolevChain((lo1, hi1), (lo0, hi0), cs)


def cheeger_buser(h: float, n: int) -> tuple[float, float]:
    """(h^2/4, 2(n-1)h + 10h^2): Cheeger's lower and Buser's upper bound on lambda_1."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    return h * h / 4, 2 * (n - 1) * h + 10 * h * h


def cheng_lambda1_upper(n: int, K: float, d_M: float, C_n: float = 1.0) -> float:
    if K < 0 or d_M <= 0:
        raise ValueError("need K >= 0 and d_M > 0")
    return (n - 1) ** 2 * K / 4 + C_n / d_M ** 2


def croke_c1_lower(n: int, K: float, d_M: float, vol: float, C_n: float = 1.0) -> float:
    """C(n) (vol / int_0^d (sqrt(-1/K) sinh(sqrt(-K) r))^{n-1} dr)^{n+1}."""
    if d_M <= 0:
        raise ValueError("d_M must be positive")
    if K > 0:
        raise ValueError("K must be nonpositive")
    if K == 0:
        denom = d_M ** n / n
    else:
        s = math.sqrt(-K)
        denom, err = integrate.quad(lambda r: (math.sinh(s * r) / s) ** (n - 1), 0.0, d_M,
                                    epsabs=0.0, epsrel=1e-12, limit=200)
        if err > 1e-9 * abs(denom):
            raise RuntimeError(f"Croke integral did not converge (estimate {denom}, error {err})")
    return C_n * (vol / denom) ** (n + 1)


def srk_closed_form(family: str, m: int) -> int:
    """Splitting rank of SL(m,R)/SO(m) or the SL(m,C) symmetric space."""
    if m < 2:
        raise ValueError("m must be >= 2")
    rank = m - 1
    if family == "sl_m_R":
        return (m * (m + 1) // 2 - 1) - rank
    if family == "sl_m_C":
        return (m * m - 1) - 2 * rank
    raise ValueError(f"unknown family {family!r}; expected 'sl_m_R' or 'sl_m_C'")


def default_li_cn(n: int) -> float:
    """Upper bound for the dimensional constant: 1 if n = 3, else 2^{(n^2 - 4n)/2}."""
    return 1.0 if n == 3 else 2.0 ** ((n * n - 4 * n) / 2)


def li_corollary_constant(n: int, p: int, K_p: float, C_S: float, V: float,
                          C_n: float | None = None) -> float:
    """Constant C with comass-type sup bound of harmonic p-forms; V when K_p = 0."""
    if n < 3 or not 1 <= p <= n - 1:
        raise ValueError("need n >= 3 and 1 <= p <= n-1")
    if K_p > 0:
        raise ValueError("K_p must be nonpositive")
    if C_S <= 0 or V <= 0:
        raise ValueError("C_S and V must be positive")
    if K_p == 0:
        return float(V)
    cn = default_li_cn(n) if C_n is None else C_n
    lam = -p * (n - p) * K_p
    return cn * (lam / C_S) ** (n / 2) * math.exp(cn * C_S / (lam * V ** (2 / n)))


# ---------------------------------------------------------------- Cheeger oracle


def cheeger_bruteforce(M: MetricComplex, *, max_cells: int = CHEEGER_MAX_CELLS) -> float:
    """Exhaustive discrete Cheeger constant over bipartitions of the top simplices.

    The cut of a bipartition is the total (n-1)-volume of faces whose incident
    top simplices lie on both sides (a vertex counts 1 in dimension one).
    """
    K = M.complex
    n = K.dimension
    if not K.is_connected():
        raise ComplexError("cheeger_bruteforce needs a connected complex")
    C = K.count(n)
    if C < 2:
        raise ComplexError("a single simplex has no separating bipartition")
    if C > max_cells:
        raise ComplexError(f"{C} top simplices exceed the exhaustive limit {max_cells}; "
                           "use a spectral sweep-cut estimate instead")
    ratio, _ = kernels.cheeger_scan(*cheeger_arrays(M))
    return float(ratio)


def cheeger_arrays(M: MetricComplex) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(cell volumes, face-to-cell incidence padded with -1, face areas) for the Cheeger scan."""
    K = M.complex
    n = K.dimension
    cell_vol = M.simplex_geometry(n)[1]
    area = np.ones(K.count(n - 1)) if n == 1 else M.simplex_geometry(n - 1)[1]
    bd = K.boundary_matrix(n)
    deg = np.count_nonzero(bd, axis=1)
    fc = np.full((bd.shape[0], max(1, int(deg.max()))), -1, dtype=np.int64)
    for f in range(bd.shape[0]):
        cells = np.nonzero(bd[f])[0]
        fc[f, :len(cells)] = cells
    return (np.ascontiguousarray(cell_vol, dtype=float), fc,
            np.ascontiguousarray(area, dtype=float))


# ---------------------------------------------------------------- descriptor and report


@dataclass
class ManifoldDescriptor:
    n: int
    p: int
    vol: float
    inj: float
    diam: float
    a: float
    b: float
    K_p: float
    case_tag: CaseTag
    mu: float
    h: float | None = None
    lambda1: float | None = None
    C0: float | None = None
    C1: float | None = None
    CS: float | None = None
    b_p: float | None = None
    unspecified_constants: dict[str, float] = field(default_factory=dict)

    REQUIRED = ("n", "p", "vol", "inj", "diam", "a", "b", "K_p", "case_tag", "mu")

    def __post_init__(self) -> None:
        self.case_tag = CaseTag.parse(self.case_tag)
        errors = []
        if not isinstance(self.n, int) or self.n < 1:
            errors.append("n must be a positive integer")
        elif not isinstance(self.p, int) or not 0 <= self.p <= self.n:
            errors.append("p must be an integer in 0..n")
        for name in ("vol", "inj", "diam", "mu"):
            if not getattr(self, name) > 0:
                errors.append(f"{name} must be > 0")
        if self.inj > 0 and self.diam > 0 and self.inj > self.diam:
            errors.append("inj must not exceed diam")
        if not 0 <= self.a <= self.b:
            errors.append("need 0 <= a <= b")
        if self.K_p > 0:
            errors.append("K_p must be <= 0")
        for name in ("h", "lambda1", "C0", "C1", "CS", "b_p"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                errors.append(f"{name} must be > 0 when supplied")
        for name, v in self.unspecified_constants.items():
            if not v > 0:
                errors.append(f"constant {name} must be > 0")
        if errors:
            raise DescriptorError("; ".join(errors))

    @property
    def bp(self) -> float:
        """b_p: explicit value, else sqrt(-K_p), else the sectional bound b."""
        if self.b_p is not None:
            return self.b_p
        return math.sqrt(-self.K_p) if self.K_p < 0 else self.b

    def const(self, name: str) -> float:
        return float(self.unspecified_constants.get(name, DEFAULT_CONSTANTS.get(name, 1.0)))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ManifoldDescriptor":
        if not isinstance(data, Mapping):
            raise DescriptorError("descriptor must be a JSON object")
        missing = [k for k in cls.REQUIRED if k not in data]
        if missing:
            raise DescriptorError(f"descriptor is missing fields: {', '.join(missing)}")
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise DescriptorError(f"unknown descriptor fields: {', '.join(sorted(extra))}")
        kw = dict(data)
        for key in ("vol", "inj", "diam", "a", "b", "K_p", "mu"):
            try:
                kw[key] = float(kw[key])
            except (TypeError, ValueError):
                raise DescriptorError(f"field {key!r} must be a number") from None
        kw["unspecified_constants"] = {str(k): float(v)
                                       for k, v in dict(kw.get("unspecified_constants") or {}).items()}
        return cls(**kw)

    def to_dict(self) -> dict[str, Any]:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["case_tag"] = self.case_tag.to_json()
        return {k: v for k, v in out.items() if v is not None and v != {}}


Status = Literal["holds", "violated", "not_applicable"]


@dataclass(frozen=True)
class ReportEntry:
    inequality_id: str
    lhs: float | None
    rhs: float | None
    margin: float | None
    status: Status
    provenance: str


def _entry(iid: str, lhs: float, rhs: float, rtol: float, provenance: str) -> ReportEntry:
    margin = rhs - lhs
    tol = rtol * max(abs(lhs), abs(rhs))
    return ReportEntry(iid, float(lhs), float(rhs), float(margin),
                       "holds" if margin >= -tol else "violated", provenance)


def _skip(iid: str, reason: str, provenance: str) -> ReportEntry:
    return ReportEntry(iid, None, None, None, "not_applicable", f"{provenance} [{reason}]")


@dataclass
class BoundReport:
    entries: list[ReportEntry] = field(default_factory=list)

    @property
    def violated(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.status == "violated"]

    def extend(self, other: "BoundReport", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(ReportEntry(prefix + e.inequality_id, e.lhs, e.rhs, e.margin,
                                            e.status, e.provenance))

    def to_dict(self) -> dict[str, Any]:
        return {"entries": [asdict(e) for e in self.entries]}


REQUIRED_COMPUTED = ("harmonic_norm", "l1_upper", "gromov_lower", "comass")


def verify_report(desc: ManifoldDescriptor, computed: Mapping[str, float], *,
                  rtol: float = DISCRETE_RTOL, include_cheeger: bool = True) -> BoundReport:
    """Check the implication-safe forms of the main inequalities.

    ``computed`` holds harmonic_norm (of beta), l1_upper (simplicial l1 value of
    beta*, an upper bound for its Gromov norm), gromov_lower (a lower bound for
    it), comass (of the harmonic form), and optionally lambda1 and h_bruteforce.
    ``rtol`` is the relative tolerance for entries involving discretized norms.
    """
    if rtol <= 0:
        raise ValueError("tolerance must be positive")
    missing = [k for k in REQUIRED_COMPUTED if computed.get(k) is None]
    if missing:
        raise DescriptorError(f"missing computed inputs: {', '.join(missing)}")
    n, p, case = desc.n, desc.p, desc.case_tag
    H = float(computed["harmonic_norm"])
    l1 = float(computed["l1_upper"])
    g_lo = float(computed["gromov_lower"])
    cm = float(computed["comass"])
    Cn = desc.const("C_n")
    entries = []

    entries.append(_entry(
        "sandwich", g_lo, l1, rtol,
        "straightening lower bound <= simplicial l1 upper bound for ||beta*||_1"))

    prov = ("Theorem upper-bound: ||beta*||_1 <= (n-p)!(n-1)^(n-p) sqrt(vol) ||beta||_H, "
            "needs Ric >= -(n-1); checked as gromov_lower <= RHS")
    if desc.b > 1:
        entries.append(_skip("thm_upper_bound", "needs b <= 1 so that Ric >= -(n-1)", prov))
    else:
        entries.append(_entry("thm_upper_bound", g_lo, thm_upper_rhs(n, p, desc.vol, H),
                              rtol, prov))

    prov = (f"Theorem general-estimate: ||beta||_H <= C/Inj^(l/2) ||beta*||_1 with C(n)={Cn:g} "
            "(parametric); checked as harmonic_norm <= coefficient * l1_upper")
    reason = thm_lower_hypothesis(case, n, p)
    if reason is None and case.kind == "negatively_curved" and desc.a <= 0:
        reason = "needs maximal curvature -a^2 < 0"
    if reason is not None:
        entries.append(_skip("thm_general_estimate", reason, prov))
    else:
        coef = thm_lower_const(case, n, p, desc.bp, desc.a, desc.inj, Cn)
        entries.append(_entry("thm_general_estimate", H, coef * l1, rtol, prov))

    prov = ("Theorem lower-bound(a): ||omega||_2^2 <= pi a^(p-n)/(n-p-1)! comass(omega) ||beta*||_1; "
            "checked with l1_upper")
    if case.kind != "negatively_curved" or desc.a <= 0:
        entries.append(_skip("thm_lower_bound_a", "needs negative curvature <= -a^2 < 0", prov))
    elif p > n - 2:
        entries.append(_skip("thm_lower_bound_a", "needs p <= n-2", prov))
    else:
        rhs = math.pi * desc.a ** (p - n) / math.factorial(n - p - 1) * cm * l1
        entries.append(_entry("thm_lower_bound_a", H * H, rhs, rtol, prov))

    prov = (f"Theorem comass-upper-bound: comass(omega) <= C b_p^((n-l)/2)/Inj^(l/2) ||omega||_2 "
            f"with C={Cn:g} (parametric), l={case.ell(n)}")
    if desc.bp <= 0:
        entries.append(_skip("thm_comass_upper_bound", "needs b_p > 0", prov))
    else:
        rhs = comass_harmonic_rhs(case, n, desc.bp, desc.inj, Cn) * H
        entries.append(_entry("thm_comass_upper_bound", cm, rhs, rtol, prov))

    hyperbolic3 = (n == 3 and p == 1 and case.kind == "negatively_curved"
                   and desc.a == 1 and desc.b == 1)
    prov = "Closed hyperbolic 3-manifolds: pi/(2 sqrt(vol)) ||beta*||_1 <= ||beta||_H; checked with gromov_lower"
    if hyperbolic3:
        entries.append(_entry("hyperbolic3_lower", math.pi / (2 * math.sqrt(desc.vol)) * g_lo,
                              H, rtol, prov))
    else:
        entries.append(_skip("hyperbolic3_lower", "closed hyperbolic 3-manifolds, p = 1 only", prov))
    prov = "Closed hyperbolic 3-manifolds: ||beta||_H <= 5 pi/sqrt(Inj) ||beta*||_1; checked with l1_upper"
    if hyperbolic3:
        entries.append(_entry("hyperbolic3_upper", H, 5 * math.pi / math.sqrt(desc.inj) * l1,
                              rtol, prov))
    else:
        entries.append(_skip("hyperbolic3_upper", "closed hyperbolic 3-manifolds, p = 1 only", prov))

    if include_cheeger:
        entries.append(cheeger_entry(desc, computed, rtol))
    return BoundReport(entries)


def cheeger_entry(desc: ManifoldDescriptor, computed: Mapping[str, float],
                  rtol: float = DISCRETE_RTOL) -> ReportEntry:
    lam = computed.get("lambda1", desc.lambda1)
    h = computed.get("h_bruteforce", desc.h)
    discrete = "h_bruteforce" in computed or "lambda1" in computed
    prov = "Cheeger: lambda_1 >= h^2/4" + (" (discrete analogue)" if discrete else "")
    if lam is None or h is None:
        return _skip("cheeger", "needs lambda1 and h", prov)
    return _entry("cheeger", h * h / 4, lam, rtol if discrete else FORMULA_RTOL, prov)
