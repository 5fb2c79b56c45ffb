"""
Grading shifts of decorated link cobordism maps, thin link homology from a
multivariable Alexander polynomial, and a grading-obstruction certificate
showing that a pants map vanishes.

Maslov convention: for a link with |w| w-basepoints in one sphere,
gr_w = M + (|w| - 1)/2.  With several spheres the -1 is counted per sphere.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .cabled import enumerate_relations, inject_vanishing, truncated_quotient
from .graded import GradedModule, MultiGrading, collapse_alexander, dims_to_json
from .laurent import LaurentMV


class NonIntegralShift(ValueError):
    pass


class InvalidCertificate(RuntimeError):
    pass


@dataclass(frozen=True)
class CobordismGradingData:
    chi_w: int
    chi_z: int
    w1_count: int
    w2_count: int
    c1_sq: int = 0
    chi_W: int = 0
    sigma_W: int = 0
    n_in_spheres: int = 1
    n_out_spheres: int = 1

    def __post_init__(self):
        for name in ("w1_count", "w2_count", "n_in_spheres", "n_out_spheres"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def then(self, other: "CobordismGradingData") -> "CobordismGradingData":
        """Stack ``other`` on top of ``self`` along a common boundary link.

        Euler characteristics add, minus the gluing circles/spheres: the
        shared link contributes |w| arcs to both Sigma_w and Sigma_z pieces
        and a 3-sphere to W (chi 0), so only the surfaces need correcting.
        """
        if self.w2_count != other.w1_count or self.n_out_spheres != other.n_in_spheres:
            raise ValueError("boundary data do not match")
        glue = self.w2_count  # strips along the gluing link, one per w (and one per z)
        return CobordismGradingData(
            self.chi_w + other.chi_w - glue,
            self.chi_z + other.chi_z - glue,
            self.w1_count,
            other.w2_count,
            self.c1_sq + other.c1_sq,
            self.chi_W + other.chi_W,
            self.sigma_W + other.sigma_W,
            self.n_in_spheres,
            other.n_out_spheres,
        )


def gr_w_shift(d: CobordismGradingData) -> Fraction:
    return (
        Fraction(d.c1_sq - 2 * d.chi_W - 3 * d.sigma_W, 4)
        + d.chi_w
        - Fraction(d.w1_count + d.w2_count, 2)
    )


def maslov_shift(d: CobordismGradingData) -> int:
    """Change of M, after converting gr_w to M on both ends."""
    dm = (
        gr_w_shift(d)
        - Fraction(d.w2_count - d.n_out_spheres, 2)
        + Fraction(d.w1_count - d.n_in_spheres, 2)
    )
    if dm.denominator != 1:
        raise NonIntegralShift(f"Maslov shift {dm} is not an integer for {d}")
    return int(dm)


def alexander_shift(d: CobordismGradingData) -> int:
    """Doubled Alexander shift, i.e. chi_w - chi_z."""
    return d.chi_w - d.chi_z


def identity_cylinder(w_count: int, n_spheres: int = 1) -> CobordismGradingData:
    """Product cobordism; each w (and each z) sweeps out one strip."""
    return CobordismGradingData(w_count, w_count, w_count, w_count, 0, 0, 0, n_spheres, n_spheres)


def quasi_stab_data(kind: str, w_count: int) -> CobordismGradingData:
    """Surface data of a positive quasi-stabilisation on a link with ``w_count`` pairs.

    S+ adds a w-disk next to an existing strip (chi_w + 1); T+ adds a z-disk.
    """
    if kind == "S+":
        return CobordismGradingData(w_count + 1, w_count, w_count, w_count + 1)
    if kind == "T+":
        return CobordismGradingData(w_count, w_count + 1, w_count, w_count + 1)
    raise ValueError(f"only S+ and T+ add basepoints, got {kind!r}")


def punctured_ball_data(chi_w: int, chi_z: int, w_inputs: list[int], w_out: int) -> CobordismGradingData:
    """B^4 with one ball removed per input: chi(W) = 1 - #inputs, signature 0."""
    J = len(w_inputs)
    return CobordismGradingData(chi_w, chi_z, sum(w_inputs), w_out, 0, 1 - J, 0, J, 1)


# Band map attaching along a z-region: counts index-0 triangles avoiding w, so
# it preserves M; the band merges two z-regions, raising A by 1/2 on its slot.
BAND_Z_SHIFT = (0, 1)


def thin_link_homology(delta: LaurentMV, n_components: int, maslov_offset: int = -1) -> GradedModule:
    """|a_h| generators at Alexander h and Maslov |h| + maslov_offset, where

        delta * prod_i (x_i^{1/2} - x_i^{-1/2}) = sum_h a_h x^h

    for links of two or more components (knots use delta itself).  The
    default offset is the one for the three-component link of the vanishing
    argument; other thin links need their own signature-dependent offset.
    """
    if delta.arity != n_components:
        raise ValueError("polynomial arity must equal the number of components")
    prod = delta
    if n_components >= 2:
        for i in range(n_components):
            prod = prod * LaurentMV.half_difference(i, n_components)
    dims: dict[MultiGrading, int] = {}
    for e, c in prod.terms.items():
        s = sum(e)
        if s % 2:
            raise ValueError(f"total Alexander grading of {e} is not an integer")
        g = MultiGrading(s // 2 + maslov_offset, e)
        dims[g] = dims.get(g, 0) + abs(c)
    return GradedModule.from_dims(dims, n_components, prefix="t")


def l2_alexander() -> LaurentMV:
    return LaurentMV.half_difference(0, 3)


@dataclass
class VanishingCertificate:
    description: str
    source: MultiGrading
    steps: list[dict]
    target: MultiGrading
    target_dim: int
    provenance: str
    module_dims: dict[str, int] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.target_dim == 0

    def to_json(self) -> dict:
        return {
            "description": self.description,
            "source": self.source.key(),
            "steps": self.steps,
            "target": self.target.key(),
            "target_dim": self.target_dim,
            "provenance": self.provenance,
            "valid": self.valid,
            "module_dims": self.module_dims,
        }


def _collapse_l2(mod: GradedModule) -> GradedModule:
    if mod.alex_arity == 3:
        return collapse_alexander(mod, [[0], [1, 2]])
    if mod.alex_arity == 2:
        return mod
    raise ValueError("expected an arity 3 module or one already collapsed to (x1; x2+x3)")


def pants_vanishing_certificate(l2_module: GradedModule, provenance: str = "thin") -> VanishingCertificate:
    """Track B through T+ then the z-band and check the landing grading is empty."""
    mod = _collapse_l2(l2_module)
    source = MultiGrading(-1, (0, 0))  # B on the split-off unknot
    tplus = quasi_stab_data("T+", 1)
    steps = [
        {
            "map": "T+ (xi insertion)",
            "data": asdict(tplus),
            "dM": maslov_shift(tplus),
            "dA2": alexander_shift(tplus),
        },
        {"map": "z-band", "data": "axiom", "dM": BAND_Z_SHIFT[0], "dA2": BAND_Z_SHIFT[1]},
    ]
    g = source
    for st in steps:
        g = g + MultiGrading(st["dM"], (0, st["dA2"]))
    cert = VanishingCertificate(
        "pants map on B factors as z-band after T+",
        source,
        steps,
        g,
        mod.dim_at(g),
        provenance,
        dims_to_json(mod.dims()),
    )
    if not cert.valid:
        raise InvalidCertificate(
            f"target grading {g.key()} has dimension {cert.target_dim} in the {provenance} module"
        )
    return cert


@dataclass
class VanishingResult:
    certificate: VanishingCertificate
    quotients: dict[int, dict[int, dict[int, int]]]  # N -> alpha -> M -> dim
    trace: list[dict]

    @property
    def is_zero(self) -> bool:
        return all(not q for q in self.quotients.values())

    def to_json(self) -> dict:
        return {
            "conclusion": "FL = 0" if self.is_zero else "nonzero",
            "certificate": self.certificate.to_json(),
            "quotients": {str(N): {str(a): {str(m): d for m, d in ms.items()} for a, ms in q.items()}
                          for N, q in self.quotients.items()},
            "trace": self.trace,
        }


def theorem13_vanishing(cert: VanishingCertificate, truncations=range(1, 7)) -> VanishingResult:
    """Kill every cabled generator once the pants map on B is known to vanish."""
    if not cert.valid:
        raise InvalidCertificate(f"certificate target {cert.target.key()} is nonzero")
    quotients = {}
    for N in truncations:
        p = inject_vanishing(enumerate_relations(N))
        quotients[N] = truncated_quotient(p)
    trace = [
        {"step": "factor", "claim": "pants map = (pants map on split unknot) (x) identity"},
        {"step": "certificate", "claim": "pants map on B vanishes", "evidence": cert.to_json()},
        {"step": "relation", "claim": "v ~ (pants on B)(x)v = 0 for every generator v"},
        {"step": "quotient", "claim": "all truncated quotients vanish",
         "truncations": list(quotients), "zero": all(not q for q in quotients.values())},
    ]
    return VanishingResult(cert, quotients, trace)


def replay(trace: list[dict]) -> bool:
    """Re-derive the certificate from the module dims recorded in a trace."""
    ev = next(s["evidence"] for s in trace if s["step"] == "certificate")
    dims = {MultiGrading.parse_key(k): v for k, v in ev["module_dims"].items()}
    mod = GradedModule.from_dims(dims, 2)
    try:
        cert = pants_vanishing_certificate(mod, ev["provenance"])
    except InvalidCertificate:
        return False
    return json.dumps(cert.to_json(), sort_keys=True) == json.dumps(ev, sort_keys=True)
