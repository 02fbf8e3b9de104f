import numpy as np
import pytest

from sortbounds import (
    CycleError,
    SizeMismatchError,
    antichain_poset,
    build_poset,
    chain_poset,
    count_induced_N,
    extends,
    maximal_chains,
    n_poset,
    poset_from_text,
    poset_to_text,
    random_poset,
    relabel,
)
from sortbounds.spexpr import parse_sp, realize


def test_build_single_pair(wedge):
    assert wedge.pairs() == [(1, 0)]
    assert wedge.n == 3


def test_build_antichain_empty_relation():
    P = build_poset(4, [])
    assert P.pairs() == []


def test_build_takes_transitive_closure():
    P = build_poset(3, [(1, 2), (2, 3)])
    assert (0, 2) in P.pairs()


def test_build_cycle_raises():
    with pytest.raises(CycleError):
        build_poset(2, [(1, 2), (2, 1)])
    with pytest.raises(CycleError):
        build_poset(3, [(1, 2), (2, 3), (3, 1)])
    with pytest.raises(CycleError):
        build_poset(2, [(1, 1)])


def test_build_out_of_range_raises():
    with pytest.raises(IndexError):
        build_poset(3, [(0, 1)])
    with pytest.raises(IndexError):
        build_poset(3, [(1, 4)])


def test_closure_idempotent(wedge):
    rebuilt = build_poset(wedge.n, [(i + 1, j + 1) for i, j in wedge.pairs()])
    assert rebuilt == wedge


def test_maximal_chains_examples(wedge):
    assert sorted(maximal_chains(wedge)) == [(1, 0), (2,)]
    assert maximal_chains(chain_poset(3)) == [(0, 1, 2)]
    assert sorted(maximal_chains(antichain_poset(3))) == [(0,), (1,), (2,)]


def test_maximal_chains_are_chains_and_unique():
    rng = np.random.default_rng(3)
    for _ in range(20):
        P = random_poset(int(rng.integers(1, 9)), rng, p=0.4)
        chains = maximal_chains(P)
        assert len(set(chains)) == len(chains)
        for c in chains:
            for a, b in zip(c, c[1:]):
                assert P.less(a, b)


def test_extends_basic():
    chain3 = chain_poset(3)
    anti3 = antichain_poset(3)
    assert extends(chain3, anti3)
    assert not extends(anti3, chain3)
    with pytest.raises(SizeMismatchError):
        extends(chain3, antichain_poset(4))


def test_extends_blownup_series_of_parallels():
    # (A+B)*(C+D) on the N_k ground labels extends N_k once the b and c
    # chains trade places (N_k puts b on top of both a and c).
    for k in (1, 2):
        nk = n_poset(k)
        Q = realize(parse_sp(f"(chain({k}) + chain({k})) * (chain({k}) + chain({k}))"))
        swap = list(range(0, k)) + list(range(2 * k, 3 * k)) \
            + list(range(k, 2 * k)) + list(range(3 * k, 4 * k))
        perm = [0] * (4 * k)
        for new, old in enumerate(swap):
            perm[old] = new
        Q_on_nk_labels = relabel(Q, perm)
        assert extends(Q_on_nk_labels, nk)


def test_chain_containment_under_extension():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(2, 8))
        P = random_poset(n, rng, p=0.2)
        Q = random_poset(n, rng, p=0.5)
        if not extends(Q, P):
            continue
        q_chains = [set(c) for c in maximal_chains(Q)]
        for c in maximal_chains(P):
            assert any(set(c) <= qc for qc in q_chains)


def test_count_induced_N():
    assert count_induced_N(n_poset(1)) == 1
    assert count_induced_N(n_poset(2)) == 16
    assert count_induced_N(n_poset(3)) == 81
    assert count_induced_N(chain_poset(6)) == 0
    assert count_induced_N(antichain_poset(6)) == 0
    assert count_induced_N(realize(parse_sp(". * (.+.+.) * (. + (. * .))"))) == 0


def test_relabel_roundtrip():
    rng = np.random.default_rng(5)
    P = random_poset(6, rng, p=0.4)
    perm = rng.permutation(6).tolist()
    Q = relabel(P, perm)
    inverse = [0] * 6
    for old, new in enumerate(perm):
        inverse[new] = old
    assert relabel(Q, inverse) == P


def test_text_format_roundtrip(wedge):
    text = poset_to_text(wedge)
    assert text.splitlines()[0] == "3"
    assert poset_from_text(text) == wedge


def test_text_format_comments_and_reduction():
    text = "# a comment\n\n4\n1 2\n2 3\n# another\n1 3\n"
    P = poset_from_text(text)
    assert P == build_poset(4, [(1, 2), (2, 3)])
    # writer emits the reduction, dropping the implied (1, 3)
    assert poset_to_text(P) == "4\n1 2\n2 3\n"


def test_text_format_errors():
    with pytest.raises(ValueError):
        poset_from_text("# only comments\n")
    with pytest.raises(ValueError):
        poset_from_text("3\n1 2 3\n")
    with pytest.raises(CycleError):
        poset_from_text("2\n1 2\n2 1\n")


def test_file_roundtrip(tmp_path):
    from sortbounds import read_poset, write_poset

    P = build_poset(5, [(1, 3), (2, 3), (3, 4)])
    path = tmp_path / "p.poset"
    write_poset(P, path)
    assert read_poset(path) == P
