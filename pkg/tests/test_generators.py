import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _strategies import seeds
from symtorsion.chain import compute_homology, validate_complex
from symtorsion.generators import (
    Infeasible,
    GenConfig,
    gen_chain_complex,
    gen_ses,
    gen_symplectic,
    symplectic_normal_form,
    transport_symplectic,
)
from symtorsion.io import Instance, SESInstance, dumps
from symtorsion.linalg import Matrix, determinant, rank
from symtorsion.pfaffian import standard_block
from symtorsion.symplectic import validate_symplectic
from symtorsion.torsion import compatibility_dets, long_exact_sequence, validate_ses


class TestChainComplexes:
    def test_acyclic_interval(self):
        g = gen_chain_complex(GenConfig(seed=0, n=1, dims=(1, 1), betti_targets=(0, 0)))
        assert g.complex.dims == (1, 1)
        assert compute_homology(g.complex).betti == (0, 0)
        assert not g.complex.d(1).is_zero()

    def test_targets_equal_dims_is_dzero(self):
        g = gen_chain_complex(GenConfig(seed=4, n=3, dims=(2, 1, 3, 1), betti_targets=(2, 1, 3, 1)))
        assert all(d.is_zero() for d in g.complex.boundaries)

    def test_bit_identical(self):
        cfg = GenConfig(seed=123, n=4, max_dim=5)
        a, b = gen_chain_complex(cfg), gen_chain_complex(cfg)
        assert a == b
        dump = lambda g: dumps(Instance(g.complex, None, g.chain_bases, g.homology_bases).to_json())
        assert dump(a) == dump(b)

    def test_different_seeds_differ(self):
        outs = {gen_chain_complex(GenConfig(seed=s, n=3)).complex for s in range(10)}
        assert len(outs) > 1

    @pytest.mark.parametrize("cfg", [
        dict(n=1, dims=(1, 1), betti_targets=(1, 1, 1)),
        dict(n=1, dims=(1, 2), betti_targets=(0, 0)),
        dict(n=2, dims=(1, 1, 1), betti_targets=(2, 0, 0)),
        dict(n=0),
        dict(n=2, entry_bound=0),
        dict(n=2, betti_targets=(-1, 0, 0)),
    ])
    def test_infeasible(self, cfg):
        with pytest.raises(Infeasible):
            gen_chain_complex(GenConfig(seed=1, **cfg))

    @given(seeds, st.integers(1, 6))
    def test_valid_with_requested_betti(self, seed, n):
        rng = random.Random(seed)
        targets = tuple(rng.randint(0, 2) for _ in range(n + 1))
        g = gen_chain_complex(GenConfig(seed=seed, n=n, max_dim=6, betti_targets=targets))
        assert validate_complex(g.complex)
        assert compute_homology(g.complex).betti == targets
        assert max(g.complex.dims) <= 6
        for p, b in enumerate(g.chain_bases):
            assert determinant(b) != 0
            reps = g.homology_bases[p]
            assert (g.complex.d(p) @ reps).is_zero()
            assert rank(compute_homology(g.complex).B_basis[p].hstack(reps)) == \
                compute_homology(g.complex).B_basis[p].cols + reps.cols

    @given(seeds)
    def test_fixed_dims(self, seed):
        dims = (3, 4, 2)
        g = gen_chain_complex(GenConfig(seed=seed, n=2, dims=dims))
        assert g.complex.dims == dims and validate_complex(g.complex)


class TestSymplectic:
    def test_dzero_middle_block(self):
        s = gen_symplectic(GenConfig(seed=0, n=2, betti_targets=(0, 2, 0)), "dzero")
        assert s.base.dims == (0, 2, 0)
        assert determinant(s.pairings[1]) != 0

    def test_exact_n2(self):
        s = gen_symplectic(GenConfig(seed=0, n=2), "exact")
        assert validate_symplectic(s)
        assert not any(compute_homology(s.base).betti)

    def test_identity_transport_is_direct_sum(self):
        nf = symplectic_normal_form(6, (1, 2, 0, 2), (1, 0, 1))
        same = transport_symplectic(nf, [(Matrix.identity(d), Matrix.identity(d)) for d in nf.base.dims])
        assert same == nf
        assert validate_symplectic(nf)

    def test_ladder_normal_form(self):
        nf = symplectic_normal_form(2, (0, 0), (1,))
        assert nf.base.dims == (1, 2, 1)
        assert validate_symplectic(nf)
        assert not any(compute_homology(nf.base).betti)

    def test_middle_standard_block(self):
        nf = symplectic_normal_form(2, (0, 4), (0,))
        assert nf.pairings[1] == standard_block(2)

    @pytest.mark.parametrize("n", [1, 3, 4, 8])
    def test_wrong_n(self, n):
        with pytest.raises(Infeasible):
            gen_symplectic(GenConfig(seed=0, n=n), "mixed")

    def test_odd_middle_betti(self):
        with pytest.raises(Infeasible):
            gen_symplectic(GenConfig(seed=0, n=2, betti_targets=(1, 1, 1)), "dzero")

    def test_asymmetric_targets(self):
        with pytest.raises(Infeasible):
            gen_symplectic(GenConfig(seed=0, n=2, betti_targets=(1, 2, 0)), "dzero")

    def test_exact_with_targets_rejected(self):
        with pytest.raises(Infeasible):
            gen_symplectic(GenConfig(seed=0, n=2, betti_targets=(1, 2, 1)), "exact")

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            gen_symplectic(GenConfig(seed=0, n=2), "other")

    @given(seeds, st.sampled_from(["dzero", "exact", "mixed"]), st.sampled_from([2, 6]))
    def test_kind_respected(self, seed, kind, n):
        s = gen_symplectic(GenConfig(seed=seed, n=n, max_dim=8 if n == 2 else 4), kind)
        assert validate_symplectic(s)
        betti = compute_homology(s.base).betti
        zero_d = all(d.is_zero() for d in s.base.boundaries)
        if kind == "dzero":
            assert zero_d
        elif kind == "exact":
            assert not any(betti)
            assert not zero_d
        else:
            assert any(betti) and not zero_d

    def test_mixed_coverage_100_seeds(self):
        for n in (2, 6):
            for seed in range(100 if n == 2 else 30):
                s = gen_symplectic(GenConfig(seed=seed, n=n, max_dim=8 if n == 2 else 4), "mixed")
                betti = compute_homology(s.base).betti
                assert all(betti[p] and betti[n - p] for p in range(n // 2 + 1)), (n, seed, betti)

    def test_deterministic(self):
        cfg = GenConfig(seed=77, n=6, max_dim=4)
        a, b = gen_symplectic(cfg, "mixed"), gen_symplectic(cfg, "mixed")
        assert dumps(Instance(a.base, a.pairings).to_json()) == dumps(Instance(b.base, b.pairings).to_json())


class TestSES:
    def test_unitriangular_twist_is_plus_one(self):
        for seed in range(20):
            g = gen_ses(GenConfig(seed=seed, n=2, max_dim=4), twist="unitriangular")
            assert all(d == 1 for d in compatibility_dets(g.ses, g.chain_A, g.chain_B, g.chain_D))

    def test_odd_twist_is_minus_one_somewhere(self):
        for seed in range(20):
            g = gen_ses(GenConfig(seed=seed, n=2, max_dim=4), twist="odd")
            dets = compatibility_dets(g.ses, g.chain_A, g.chain_B, g.chain_D)
            assert all(abs(d) == 1 for d in dets)
            wide = [p for p, b in enumerate(g.chain_B) if b.cols >= 2]
            assert [p for p, d in enumerate(dets) if d == -1] == wide

    def test_deterministic(self):
        cfg = GenConfig(seed=5, n=3, max_dim=4)
        a, b = gen_ses(cfg), gen_ses(cfg)
        dump = lambda g: dumps(SESInstance(g.ses, g.chain_A, g.chain_B, g.chain_D).to_json())
        assert dump(a) == dump(b)

    @given(seeds, st.integers(1, 4))
    def test_valid(self, seed, n):
        g = gen_ses(GenConfig(seed=seed, n=n, max_dim=4))
        assert validate_ses(g.ses)
        assert g.twist in ("unitriangular", "odd")
        assert all(abs(d) == 1 for d in compatibility_dets(g.ses, g.chain_A, g.chain_B, g.chain_D))

    def test_connecting_map_sometimes_nonzero(self):
        hits = sum(any(not d.is_zero() for d in long_exact_sequence(gen_ses(GenConfig(seed=s, n=2, max_dim=4)).ses).delta)
                   for s in range(40))
        assert hits > 0
