"""Protocol flow: honest runs, acceptance checking, hiding."""

import itertools
import random
from fractions import Fraction

import pytest

from relbc import (
    FieldSpec,
    HonestSharedRandomness,
    ProtocolParams,
    Transcript,
    Variant,
    hiding_distribution,
    honest_response,
    run_honest,
    tilde_transform,
    verify_values,
)
from relbc.errors import CapabilityError

GF2 = FieldSpec(2)
GF3 = FieldSpec(3)


def test_params_counts():
    p = ProtocolParams(GF3, 4, Variant.STANDARD)
    assert p.n_rounds == 4 and p.n_challenges == 3
    q = ProtocolParams(GF3, 4, Variant.SYMMETRIZED)
    assert q.n_rounds == 4 and q.n_challenges == 4


def test_single_round_is_two_messages():
    p = ProtocolParams(GF3, 1)
    assert p.single_round
    assert p.n_rounds == 2 and p.n_challenges == 1


def test_params_validation():
    with pytest.raises(ValueError):
        ProtocolParams(GF2, 0)
    with pytest.raises(ValueError):
        ProtocolParams(GF2, 1, Variant.SYMMETRIZED)


def test_variant_accepts_strings():
    assert ProtocolParams(GF2, 3, "standard").variant is Variant.STANDARD
    assert ProtocolParams(GF2, 3, "symmetrized").variant is Variant.SYMMETRIZED


@pytest.mark.parametrize("variant", [Variant.STANDARD, Variant.SYMMETRIZED])
@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_honest_runs_always_accepted(variant, m):
    for spec in (GF2, GF3):
        params = ProtocolParams(spec, m, variant)
        for d in (0, 1):
            for seed in range(10):
                assert run_honest(params, d, seed=seed).accepted


def test_honest_single_round_accepted():
    params = ProtocolParams(GF3, 1)
    for d in (0, 1):
        assert run_honest(params, d, seed=4).accepted


def test_honest_completeness_enumerated():
    # every share/challenge combination is accepted, not just sampled ones
    for variant in (Variant.STANDARD, Variant.SYMMETRIZED):
        for m in (2, 3, 4):
            params = ProtocolParams(GF2, m, variant)
            n_r, n_c = params.n_rounds, params.n_challenges
            for d in (0, 1):
                for a in itertools.product(range(2), repeat=n_r):
                    for xs in itertools.product(range(2), repeat=n_c):
                        rand = HonestSharedRandomness(a, xs)
                        ys = tuple(honest_response(params, k, d, rand)
                                   for k in range(1, n_r + 1))
                        assert verify_values(params, d, xs, ys)


def test_first_response_masks_bit():
    # y_1 = d*x_1 + a_1 with uniform a_1 is uniform regardless of d
    params = ProtocolParams(GF3, 3)
    rand = HonestSharedRandomness((2, 1, 0), (1, 2))
    assert honest_response(params, 1, 1, rand) == GF3.add(GF3.mul(1, 1), 2)
    assert honest_response(params, 1, 0, rand) == 2


def test_round_index_out_of_range():
    params = ProtocolParams(GF2, 3)
    rand = HonestSharedRandomness((0, 0, 0), (0, 0))
    with pytest.raises(ValueError):
        honest_response(params, 4, 0, rand)


def test_verify_rejects_tampered_response():
    params = ProtocolParams(GF3, 4)
    t = run_honest(params, 1, seed=8)
    bad = list(t.responses)
    bad[-1] = GF3.add(bad[-1], 1)
    assert not verify_values(params, 1, t.challenges, tuple(bad))


def test_verify_length_and_bit_validation():
    params = ProtocolParams(GF2, 3)
    with pytest.raises(ValueError):
        verify_values(params, 0, (0,), (0, 0, 0))
    with pytest.raises(ValueError):
        verify_values(params, 2, (0, 0), (0, 0, 0))


def test_verify_matches_explicit_chain():
    # independent recomputation of the acceptance predicate
    rng = random.Random("chain")
    for variant in (Variant.STANDARD, Variant.SYMMETRIZED):
        params = ProtocolParams(GF3, 4, variant)
        for _ in range(200):
            d = rng.randrange(2)
            xs = tuple(rng.randrange(3) for _ in range(params.n_challenges))
            ys = tuple(rng.randrange(3) for _ in range(params.n_rounds))
            alpha = d
            for i in range(3):
                alpha = GF3.sub(ys[i], GF3.mul(xs[i], alpha))
            if variant is Variant.STANDARD:
                expect = ys[3] == alpha
            else:
                expect = ys[3] == GF3.mul(xs[3], alpha)
            assert verify_values(params, d, xs, ys) == expect


def test_tilde_transform_self_inverse():
    ys = (1, 2, 0, 1, 2)
    assert tilde_transform(GF3, tilde_transform(GF3, ys)) == ys
    assert tilde_transform(GF2, (1, 1, 0)) == (1, 1, 0)  # identity in char 2


def test_tilde_transform_signs():
    assert tilde_transform(GF3, (1, 1, 1, 1)) == (1, 2, 1, 2)


def test_transcript_round_trip():
    t = run_honest(ProtocolParams(GF3, 3), 1, seed=2)
    d = t.to_dict()
    assert d["schema"] == 1
    assert Transcript.from_dict(d) == t


def test_run_honest_deterministic_per_seed():
    params = ProtocolParams(GF3, 4)
    assert run_honest(params, 0, seed=6) == run_honest(params, 0, seed=6)
    assert run_honest(params, 0, seed=6) != run_honest(params, 0, seed=7)


@pytest.mark.parametrize("spec,m", [(GF2, 2), (GF2, 3), (GF2, 4),
                                    (GF3, 2), (GF3, 3)])
def test_perfect_hiding_before_reveal(spec, m):
    for variant in (Variant.STANDARD, Variant.SYMMETRIZED):
        if variant is Variant.SYMMETRIZED and m < 2:
            continue
        params = ProtocolParams(spec, m, variant)
        for upto in range(1, params.n_rounds):
            dist = hiding_distribution(params, upto)
            assert dist[0] == dist[1]
            assert sum(dist[0].values()) == 1


def test_reveal_discloses_bit():
    for variant in (Variant.STANDARD, Variant.SYMMETRIZED):
        params = ProtocolParams(GF2, 3, variant)
        dist = hiding_distribution(params, params.n_rounds)
        assert dist[0] != dist[1]


def test_hiding_single_round():
    params = ProtocolParams(GF3, 1)
    dist = hiding_distribution(params, 1)
    assert dist[0] == dist[1]
    full = hiding_distribution(params, 2)
    assert full[0] != full[1]


def test_hiding_distribution_is_exact():
    params = ProtocolParams(GF2, 3)
    dist = hiding_distribution(params, 2)
    for mass in dist[0].values():
        assert isinstance(mass, Fraction)


def test_hiding_capability_cap():
    with pytest.raises(CapabilityError):
        hiding_distribution(ProtocolParams(FieldSpec(5), 8), 7)
