from collections import Counter

import pytest

from conftest import chi_square_p
from rglab.errors import SpaceExhausted
from rglab.models import (
    ModelParams,
    Presentation,
    derive_rng,
    derive_seed,
    floor_power,
    make_rng,
    parse_presentation,
    relator_count,
    sample_positive_relator,
    sample_presentation,
    sample_relator,
    word_space_size,
    write_presentation,
)
from rglab.words import (
    count_cyclically_reduced,
    enumerate_words,
    is_cyclically_reduced,
    is_positive,
)


# ---------------------------------------------------------------- counts

def test_floor_power_exact_integers_snap():
    assert floor_power(3, 2.0) == 9
    assert floor_power(3, 1.0) == 3
    # 3 * (1/3) rounds to exactly 1.0 in binary, so this is the exact case
    assert floor_power(3, 3 * (1 / 3)) == 3
    assert floor_power(29, 2.4) == 3234
    assert floor_power(1, 0.73) == 1


def test_floor_power_floors_strictly_between():
    assert floor_power(3, 0.9999) == 2
    assert floor_power(5, 1.5) == 11  # 5^1.5 = 11.18...


def test_relator_count_and_budget():
    params = ModelParams(n=2, k=3, d=1 / 3)
    assert relator_count(params) == 3
    big = ModelParams(n=50, k=12, d=0.9)
    with pytest.raises(OverflowError):
        relator_count(big)
    assert relator_count(big, budget=10**22) == 3571577691562094717368


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(n=0, k=3, d=0.4)
    with pytest.raises(ValueError):
        ModelParams(n=2, k=0, d=0.4)
    with pytest.raises(ValueError):
        ModelParams(n=2, k=3, d=0.0)
    with pytest.raises(ValueError):
        ModelParams(n=2, k=3, d=1.0)
    assert ModelParams(n=2, k=3, d=0.4, positive=True).name == "M+_3(2, 0.4)"


def test_word_space_size():
    assert word_space_size(ModelParams(n=2, k=3, d=0.4)) == count_cyclically_reduced(2, 3)
    assert word_space_size(ModelParams(n=3, k=4, d=0.4, positive=True)) == 81


# ---------------------------------------------------------------- sampling

def test_sample_relator_is_cyclically_reduced_and_right_length():
    rng = make_rng(5)
    for _ in range(2_000):
        word = sample_relator(3, 5, rng)
        assert len(word) == 5
        assert is_cyclically_reduced(word)


def test_sample_relator_rank_one():
    rng = make_rng(5)
    seen = {sample_relator(1, 4, rng) for _ in range(100)}
    assert seen <= {(1, 1, 1, 1), (-1, -1, -1, -1)}
    assert len(seen) == 2


def test_sample_positive_relator():
    rng = make_rng(6)
    for _ in range(500):
        word = sample_positive_relator(2, 4, rng)
        assert len(word) == 4 and is_positive(word)


def test_sampler_determinism():
    a = [sample_relator(2, 3, make_rng(42)) for _ in range(50)]
    b = [sample_relator(2, 3, make_rng(42)) for _ in range(50)]
    c = [sample_relator(2, 3, make_rng(43)) for _ in range(50)]
    assert a == b
    assert a != c


def test_sampler_uniformity_chi_square_quick():
    # Lighter version of the acceptance criterion: 2*10^4 draws at (2,3).
    space = list(enumerate_words(2, 3, "cyclically_reduced"))
    rng = make_rng(314)
    counts = Counter(sample_relator(2, 3, rng) for _ in range(20_000))
    expected = 20_000 / len(space)
    stat = sum((counts.get(w, 0) - expected) ** 2 / expected for w in space)
    assert chi_square_p(stat, len(space) - 1) > 1e-3


def test_positive_sampler_uniformity_quick():
    space = list(enumerate_words(2, 2, "positive"))
    rng = make_rng(217)
    counts = Counter(sample_positive_relator(2, 2, rng) for _ in range(8_000))
    expected = 8_000 / len(space)
    stat = sum((counts.get(w, 0) - expected) ** 2 / expected for w in space)
    assert chi_square_p(stat, len(space) - 1) > 1e-3


def test_derive_seed_is_stable_and_split():
    assert derive_seed(1, 0, 0) == derive_seed(1, 0, 0)
    assert derive_seed(1, 0, 0) != derive_seed(1, 0, 1)
    assert derive_seed(1, 0, 0) != derive_seed(2, 0, 0)
    a = derive_rng(9, 3).integers(0, 1000, size=4).tolist()
    b = derive_rng(9, 3).integers(0, 1000, size=4).tolist()
    assert a == b


# ---------------------------------------------------------------- presentations

def test_sample_presentation_counts_and_distinctness():
    params = ModelParams(n=2, k=6, d=0.4, seed=8)
    pres = sample_presentation(params)
    assert len(pres.relators) == relator_count(params)
    assert len(set(pres.relators)) == len(pres.relators)
    assert pres.params == params
    for rel in pres.relators:
        assert len(rel) == 6 and is_cyclically_reduced(rel)


def test_sample_presentation_positive_model():
    params = ModelParams(n=3, k=4, d=0.5, positive=True, seed=1)
    pres = sample_presentation(params)
    assert all(is_positive(r) for r in pres.relators)


def test_sample_presentation_space_exhausted():
    params = ModelParams(n=1, k=2, d=0.999)
    with pytest.raises(SpaceExhausted):
        sample_presentation(params, count_override=3)


def test_sample_presentation_count_override_and_determinism():
    params = ModelParams(n=2, k=3, d=0.4, seed=123)
    a = sample_presentation(params, count_override=10)
    b = sample_presentation(params, count_override=10)
    assert a == b and len(a.relators) == 10


def test_presentation_make_validates():
    with pytest.raises(ValueError):
        Presentation.make(2, [(1, -1)])  # not reduced
    with pytest.raises(ValueError):
        Presentation.make(2, [(1, 2, -1)])  # not cyclically reduced
    with pytest.raises(ValueError):
        Presentation.make(2, [(3,)])  # letter out of range
    with pytest.raises(ValueError):
        Presentation.make(2, [()])  # identity relator
    pres = Presentation.make(2, [(2, 1), (1, 2), (1, 2)])
    assert pres.relators == ((1, 2), (2, 1))  # sorted, deduplicated


def test_presentation_params_consistency_checks():
    params = ModelParams(n=2, k=2, d=0.4, positive=True)
    with pytest.raises(ValueError):
        Presentation.make(2, [(1, -2)], params=params)  # negative letter
    with pytest.raises(ValueError):
        Presentation.make(2, [(1, 2, 1)], params=params)  # wrong length
    with pytest.raises(ValueError):
        Presentation.make(3, [(1, 2)], params=params)  # wrong rank


def test_relator_length_and_digest():
    pres = Presentation.make(2, [(1, 2), (2, 2)])
    assert pres.relator_length() == 2
    assert Presentation.make(2, []).relator_length() is None
    assert pres.digest() == Presentation.make(2, [(2, 2), (1, 2)]).digest()
    assert pres.digest() != Presentation.make(2, [(1, 2)]).digest()


def test_write_parse_round_trip_with_params():
    params = ModelParams(n=2, k=3, d=1 / 3, positive=False, seed=7)
    pres = sample_presentation(params)
    text = write_presentation(pres)
    back = parse_presentation(text)
    assert back == pres
    assert write_presentation(back) == text


def test_write_parse_round_trip_without_params():
    pres = Presentation.make(3, [(1, 2, 3), (3, 2, 1)])
    text = write_presentation(pres)
    assert parse_presentation(text) == pres


def test_parse_presentation_rejects_bad_input():
    with pytest.raises(ValueError):
        parse_presentation("rel 1 2\n")  # no gens header
    with pytest.raises(ValueError):
        parse_presentation("gens 2\nrel 1 0\n")
    with pytest.raises(ValueError):
        parse_presentation("gens 2\nwobble 1\n")
