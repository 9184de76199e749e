"""Shared builders for test families and seeded random data."""

from fractions import Fraction

from uniwaring import GroupSpec, MorphismFamily, abelianize, is_generating
from uniwaring.families import morphism_from_log_coords
from uniwaring.groupspec import full_unitriangular_spec, heisenberg_spec
from uniwaring.matrices import NilMatrix
from uniwaring.poly import Poly
from uniwaring.scalars import Scalar

X = Poly.x()


def heis_family(ring="Q"):
    """f1 = exp(x E12), f2 = exp(x E23); basis order is E12, E13, E23."""
    spec = heisenberg_spec(ring)
    f1 = morphism_from_log_coords(spec, [X, 0, 0])
    f2 = morphism_from_log_coords(spec, [0, 0, X])
    return MorphismFamily([f1, f2])


def u4_simple_roots(ring="Q"):
    """exp(x E12), exp(x E23), exp(x E34); basis order E12,E13,E14,E23,E24,E34."""
    spec = full_unitriangular_spec(4, ring)
    fs = []
    for idx in (0, 3, 5):
        coords = [Poly()] * 6
        coords[idx] = X
        fs.append(morphism_from_log_coords(spec, coords))
    return MorphismFamily(fs)


def cube_family(ring="Z"):
    """One-dimensional group with the cube map f(x) = exp(x^3 E12)."""
    spec = GroupSpec(2, ring, [NilMatrix.elementary(2, 0, 1)])
    f = morphism_from_log_coords(spec, [Poly([0, 0, 0, 1])])
    return MorphismFamily([f])


def rational(rng, height, nonzero=False):
    while True:
        num = rng.randint(-height, height)
        den = rng.randint(1, height)
        if num or not nonzero:
            return Fraction(num, den)


def random_scalar(rng, height, gaussian=False, nonzero=False):
    while True:
        s = Scalar(
            rational(rng, height),
            rational(rng, height) if gaussian else 0,
        )
        if s or not nonzero:
            return s


def random_generating_family(spec, n, rng, height=3, degree=2, max_tries=50):
    """Random exp-of-polynomial families, resampled until generating."""
    gaussian = spec.fraction_field == "QI"
    integral = spec.ring in ("Z", "ZI")
    for _ in range(max_tries):
        fs = []
        for _ in range(n):
            coords = []
            for _ in range(spec.dim):
                coeffs = [
                    Scalar(rng.randint(-height, height),
                           rng.randint(-height, height) if gaussian else 0)
                    if integral
                    else random_scalar(rng, height, gaussian)
                    for _ in range(degree + 1)
                ]
                coords.append(Poly(coeffs))
            fs.append(morphism_from_log_coords(spec, coords))
        fam = MorphismFamily(fs)
        if is_generating(abelianize(fam))[0]:
            return fam
    raise RuntimeError("failed to sample a generating family")


def random_word_factors(rng, n, length, height, gaussian=False):
    return [
        (
            rng.randint(1, n),
            random_scalar(rng, height, gaussian),
            rng.choice((1, -1)),
        )
        for _ in range(length)
    ]
