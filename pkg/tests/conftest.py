import pytest

from weylzeta import coxeter


AFFINE_TAGS = ("A2t", "C2t", "G2t")


@pytest.fixture(scope="session")
def tables():
    """Shared bound-24 element tables for the three rank-2 affine types."""
    return {tag: coxeter.enumerate_elements(coxeter.build_system(tag), 24) for tag in AFFINE_TAGS}


@pytest.fixture(scope="session")
def torus_k2(tables):
    from weylzeta import zeta

    return {
        tag: zeta.torus_quotient_rep(coxeter.build_system(tag), 2, tables[tag])
        for tag in AFFINE_TAGS
    }
