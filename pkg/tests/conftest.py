import pytest

from frobdist import elliptic_curve, hyperelliptic_curve, numerator_from_curve


@pytest.fixture(scope="session")
def curve_f3_ss():
    """y^2 = x^3 + x over F_3, supersingular."""
    return elliptic_curve(3, 1, 0)


@pytest.fixture(scope="session")
def curve_f5_ord():
    """y^2 = x^3 - x over F_5, ordinary."""
    return elliptic_curve(5, -1, 0)


@pytest.fixture(scope="session")
def curve_f5_g2():
    """y^2 = x^5 + x + 1 over F_5, genus 2 (f' = 1, so squarefree);
    supersingular, with theta = (1/2, 1/2)."""
    return hyperelliptic_curve(5, [1, 1, 0, 0, 0, 1])


@pytest.fixture(scope="session")
def curve_f5_g2_ord():
    """y^2 = x^5 + x^3 + x + 1 over F_5: ordinary genus 2 with two distinct
    angles and no small integer relation.  Its numerator splits into two
    elliptic quadratics (traces 2 and -3), so it also exercises the
    reducible-but-relation-free case."""
    return hyperelliptic_curve(5, [1, 1, 0, 1, 0, 1])


@pytest.fixture(scope="session")
def z_f3_ss(curve_f3_ss):
    return numerator_from_curve(curve_f3_ss)


@pytest.fixture(scope="session")
def z_f5_ord(curve_f5_ord):
    return numerator_from_curve(curve_f5_ord)


@pytest.fixture(scope="session")
def z_f5_g2(curve_f5_g2):
    return numerator_from_curve(curve_f5_g2)


@pytest.fixture(scope="session")
def z_f5_g2_ord(curve_f5_g2_ord):
    return numerator_from_curve(curve_f5_g2_ord)
