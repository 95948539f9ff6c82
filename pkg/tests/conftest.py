from __future__ import annotations

import pytest

from mdsforge.codes import LinearCode, grs_generator
from mdsforge.finite_field import field_for_q

SMALL_Q = [2, 3, 4, 5, 7, 8, 9]


@pytest.fixture(params=SMALL_Q)
def field(request):
    return field_for_q(request.param)


def grs(q: int, k: int, n: int | None = None) -> LinearCode:
    f = field_for_q(q)
    return LinearCode(f, grs_generator(f, k, n))
