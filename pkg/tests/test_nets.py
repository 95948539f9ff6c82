from __future__ import annotations

import pytest

from conftest import grs
from mdsforge.codes import Code, is_mds
from mdsforge.errors import AxiomViolation, DegreeTooSmall, NotMDS, SchemaError
from mdsforge.extension import canonical_column, find_extensions
from mdsforge.finite_field import build_field, field_for_q
from mdsforge.nets import (Net, affine_plane_net, axiom_violations, class_from_column, code_from_net,
                           extend_net, is_net, mols_text, net_from_code)

PARITY = Code.from_words(2, 2, [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]])


def test_parity_net_is_ag22():
    net = net_from_code(PARITY)
    assert net.q == 2 and net.n == 3 and is_net(net)
    assert extend_net(net) == []


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_counts(q):
    net = affine_plane_net(field_for_q(q))
    assert net.n == q + 1
    lines = net.lines()
    assert len(lines) == net.n * q and all(len(l) == q for l in lines)
    for p in net.points:
        assert sum(p in l for l in lines) == net.n


@pytest.mark.parametrize("q", [2, 3, 4])
def test_round_trips(q):
    for n in range(3, q + 2):
        code = grs(q, 2, n).code()
        net = net_from_code(code)
        back = code_from_net(net)
        assert is_mds(back)
        for a, b in zip(code.words.T.tolist(), back.words.T.tolist()):
            assert canonical_column(a) == canonical_column(b)
        assert net_from_code(back) == net


@pytest.mark.parametrize("q", [3, 4])
def test_extend_matches_code_extension(q):
    code = grs(q, 2, 3).code()
    net = net_from_code(code)
    expect = sorted(class_from_column(c, q) for c in find_extensions(code).columns)
    got = extend_net(net)
    assert got == expect and got
    for cls in got:
        assert is_net(net.with_class(cls))


def test_degree3_order3_completes():
    net = Net(3, affine_plane_net(build_field(3)).classes[:3])
    ext = extend_net(net)
    assert len(ext) == 1 and is_net(net.with_class(ext[0]))


def test_errors():
    with pytest.raises(NotMDS):
        net_from_code(grs(3, 3, 4).code())
    with pytest.raises(DegreeTooSmall):
        net_from_code(grs(3, 2, 2).code())
    broken = Net(2, (((0, 1), (2, 3)), ((0, 1), (2, 3)), ((0, 3), (1, 2))))
    assert axiom_violations(broken)
    with pytest.raises(AxiomViolation):
        code_from_net(broken)
    f = build_field(3)
    ag = affine_plane_net(f)
    assert not is_net(Net(3, ag.classes + (ag.classes[0],)))


def test_json_and_mols():
    net = affine_plane_net(build_field(3))
    assert Net.from_json(net.to_json()) == net
    with pytest.raises(SchemaError):
        Net.from_json({"q": 3})
    text = mols_text(net)
    assert text.count("square") == 2
    rows = text.split("\n\n")[0].splitlines()[1:]
    assert all(sorted(r.split()) == ["0", "1", "2"] for r in rows)
