from fractions import Fraction

import pytest

import allostery as al


@pytest.fixture(scope="module")
def genus2():
    return al.Presentation.orientable(1, 1)


@pytest.fixture(scope="module")
def chain(genus2):
    return al.build_chain(genus2, Fraction(1, 2), [3, 5], 2)


def test_presentation(genus2):
    assert genus2.genus == 2
    assert genus2.generator_names == ["a1", "al1", "b1", "be1"]
    assert genus2.relator == "a1 al1 a1^-1 al1^-1 be1 b1 be1^-1 b1^-1"
    assert genus2.normalize("a1 b1 b1^-1") == "a1"
    with pytest.raises(al.ForeignGenerators):
        genus2.normalize("c1")


def test_word_problem(genus2):
    assert al.is_trivial(genus2, genus2.relator)
    assert al.dehn_reduce(genus2, "a1 b1") == (False, "a1 b1")
    g3 = al.Presentation.nonorientable(3)
    assert al.is_trivial(g3, "x1 x1 x2 x2 x3 x3")


def test_actions(genus2):
    c3 = al.cyclic_cover(genus2, 3)
    assert c3.degree == 3
    assert c3.verify()[0]
    assert c3.act("b1", 0) == 1
    assert c3.fix_set("a1") == [0, 1, 2]
    assert c3.homology_dimension(3) == 8
    c6 = al.product_intersection(al.cyclic_cover(genus2, 2), c3)
    assert c6.degree == 6
    broken = al.PointedAction(genus2, [[0, 0], [0, 1], [1, 0], [0, 1]])
    ok, axiom, _ = broken.verify()
    assert not ok and axiom == "malformed"


def test_rates():
    steps = al.choose_rates(Fraction(1, 2), [3, 5], 2)
    assert [s.rate for s in steps] == [Fraction(5, 9), Fraction(23, 25)]
    assert steps[-1].partial == Fraction(23, 45)
    with pytest.raises(al.DomainError):
        al.choose_rates(1, [3], 1)


def test_build_lambda(genus2):
    action, cert, ok = al.build_lambda(genus2, 3, Fraction(1, 3), "a1", "b1", seed=7)
    assert ok
    assert cert["witnesses"]["fixed_count"] * 3 == action.degree == cert["degree"]
    assert action.count_fixed(al.gamma_a_words(genus2)) * 3 == action.degree


def test_chain_measures(chain):
    assert chain.depth == 2
    assert chain.verify()[0]
    assert al.chain_degree(chain, 2) == 81 * 625
    assert al.cylinder_measure(chain, al.gamma_a_words(chain.presentation), level=2) == Fraction(23, 45)
    assert al.fix_proportion(chain, "b1", 2) == 0
    assert al.cylinder_measure(chain, [], level=2) == 1
    assert al.urs_certificate(chain, 2)["failures"] == []


def test_compare_and_induce(genus2, chain):
    third = al.build_chain(genus2, Fraction(1, 3), [3, 5], 2)
    report = al.compare_chains(third, chain, 2)
    assert report["gap"] == Fraction(7, 45)
    assert report["distinct"]
    m = al.induced_gamma_a_measure(chain, 3, 2)
    assert m["value"] == (m["t_n"] + m["c_n"]) / 2
    assert m["direct"] == m["value"]
    assert al.verify_embedding(3)[0]


def test_files_and_cli(chain, tmp_path):
    manifest = chain.save(str(tmp_path / "chain"))
    again = al.load_chain(manifest)
    assert again.verify()[0]
    code, out, _ = al.run_cli(["verify", manifest])
    assert code == 0 and out == "ok depth 2\n"
    code, _, _ = al.run_cli(["build", "--primes", "3", "--depth", "1"])
    assert code == 4
    with pytest.raises(al.IoError):
        al.load_chain(str(tmp_path / "missing.json"))
