from hypothesis import strategies as st

from carlitzlab.algebra import Frac, Poly, make_field

F3 = make_field(3)
F5 = make_field(5)
F9 = make_field(3, 2)


def polys(F, max_deg=6, nonzero=False):
    s = st.lists(st.integers(0, F.q - 1), min_size=0, max_size=max_deg + 1).map(lambda c: Poly(F, c))
    return s.filter(bool) if nonzero else s


def fracs(F, max_deg=4):
    return st.tuples(polys(F, max_deg), polys(F, max_deg, nonzero=True)).map(lambda nd: Frac(*nd))


fields = st.sampled_from([F3, F5, F9])
