from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from nonradon.group import Q1

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def q1s(max_denominator: int = 10**6):
    return st.builds(
        lambda q, k: Q1(Fraction(k % q, q)),
        st.integers(1, max_denominator),
        st.integers(0, 10**12),
    )
