"""Acceptance gate: the eleven release criteria.

Each test prints one `criterion NN <name>: PASS|FAIL` line (visible in
the failure report or under -s) and then asserts.  Criterion 8 states
an identity the engine does not satisfy: the bilinear pairing residue
[z^0](psi- psi+) is generically nonzero.  The computation is kept
faithful and the test fails honestly; its truncation-stability half is
asserted first and holds.
"""
import json
import math
import random
import time

from loggas.cli import main as cli_main
from loggas.ensemble import MomentSequence, NamedWeight, correlation, partition_function, r1_normalization
from loggas.exterior import (
    ModelShape,
    basis_blade,
    hyperpfaffian,
    omega,
    pfaffian_classical,
    star,
    wedge,
    zero_multivector,
)
from loggas.oracle import direct_interaction, integrate_partition
from loggas.scalars import Tagged, rational, scalar_is_zero
from loggas.spine import (
    ToeplitzOperator,
    adjunction_expansion,
    higher_plucker_residual,
    plucker_residual,
    structure_table,
    toeplitz_residual,
)
from loggas.tau import extraction_evaluate, hirota_residual, miwa_negative_moments, psi_minus, tau, transport_spectrum

SEED = 20260817
SHAPES_FULL = [(2, 2), (2, 3), (2, 4), (2, 5), (4, 2), (4, 3)]
SHAPES_CORE = [(2, 2), (2, 3), (4, 2)]


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    print(f"criterion {num:02d} {name}: {verdict}{' (' + detail + ')' if detail else ''}")


def _rat(rng: random.Random):
    return rational(f"{rng.randint(-9, 9)}/{rng.randint(1, 9)}")


def _moments(rng: random.Random, D: int) -> MomentSequence:
    return MomentSequence([_rat(rng) for _ in range(D + 1)])


def test_criterion_01_confluent_vandermonde():
    rng = random.Random(SEED)
    t0 = time.monotonic()
    checked = 0
    for L, M in SHAPES_FULL:
        shape = ModelShape(L, M)
        for _ in range(100):
            xs = [_rat(rng) for _ in range(M)]
            form = omega(xs[0], shape)
            for x in xs[1:]:
                form = wedge(form, omega(x, shape))
            assert star(form) == direct_interaction(xs, L), (L, M, xs)
            checked += 1
    elapsed = time.monotonic() - t0
    ok = elapsed <= 60.0
    _report(1, "confluent-vandermonde", ok, f"{checked} tuples in {elapsed:.1f}s")
    assert ok, f"runtime {elapsed:.1f}s exceeds 60s"


def test_criterion_02_partition_values():
    shape = ModelShape(2, 2)
    z_u = partition_function(NamedWeight.uniform(0, 1).moments(4), shape)
    z_g = partition_function(NamedWeight.gaussian().moments(4), shape)
    z_f = partition_function(NamedWeight.gaussian().moments(4).as_float(), shape)
    ok_u = z_u == rational("1/30")
    ok_g = z_g == Tagged("3/2", 2)
    ok_f = abs(z_f - 4.71238898038469) < 1e-12
    _report(2, "partition-values", ok_u and ok_g and ok_f,
            f"uniform {z_u}, gaussian {z_g!r}, float {z_f!r}")
    assert ok_u and ok_g and ok_f


def test_criterion_03_route_equality():
    rng = random.Random(SEED + 3)
    t0 = time.monotonic()
    for L, M in SHAPES_FULL:
        shape = ModelShape(L, M)
        for _ in range(100):
            mom = _moments(rng, 2 * shape.K)
            lhs = partition_function(mom, shape, route="hyperpfaffian")
            rhs = partition_function(mom, shape, route="structure_poly")
            assert lhs == rhs, (L, M)
    _report(3, "route-equality", True,
            f"{len(SHAPES_FULL) * 100} sequences in {time.monotonic() - t0:.1f}s")


def test_criterion_04_pfaffian_crosscheck():
    rng = random.Random(SEED + 4)
    for N in (4, 6, 8, 10):
        shape = ModelShape(2, N // 2)
        for _ in range(25):
            A = [[rational(0)] * N for _ in range(N)]
            form = zero_multivector(shape)
            for i in range(N):
                for j in range(i + 1, N):
                    c = _rat(rng)
                    A[i][j] = c
                    A[j][i] = -c
                    form = form + basis_blade(shape, [i, j], c)
            assert hyperpfaffian(form) == pfaffian_classical(A), N
    _report(4, "pfaffian-crosscheck", True, "100 arrays, N in {4,6,8,10}")


def test_criterion_05_plucker_suites():
    rng = random.Random(SEED + 5)
    for L, M in SHAPES_CORE:
        shape = ModelShape(L, M)
        for n in range(-2 * shape.K - 2, 2 * shape.K + 3):
            assert plucker_residual(n, shape).is_zero(), ("r_n", L, M, n)
        for j in range(2, M + 1):
            for n in range(-j * shape.K - 2, j * shape.K + 3):
                assert higher_plucker_residual(n, j, shape).is_zero(), ("higher", L, M, j, n)
        for _ in range(20):
            T = ToeplitzOperator.from_dict({k: _rat(rng) for k in (-1, 0, 1)})
            for n in range(-2 * shape.K - 2, 2 * shape.K + 3):
                assert toeplitz_residual(T, n, shape).is_zero(), ("toeplitz", L, M, n)
    _report(5, "plucker-suites", True, "r_n, higher, 20 Toeplitz band-3 per shape")


def test_criterion_06_adjunction():
    rng = random.Random(SEED + 6)
    for L, M in SHAPES_CORE:
        shape = ModelShape(L, M)
        table = structure_table(shape, cache=False)
        for _ in range(20):
            mom = _moments(rng, 2 * shape.K)
            for q in range(-shape.K, shape.K + 1):
                lhs = extraction_evaluate(q, mom, shape)
                rhs = adjunction_expansion(q, mom, shape, table)
                assert lhs == rhs, (L, M, q)
    _report(6, "adjunction", True, "all |q| <= K, 20 sequences per shape")


def test_criterion_07_negative_miwa():
    uniform = NamedWeight.uniform(0, 1)
    poly = psi_minus(uniform.moments(4), ModelShape(2, 2))
    worked = {0: "1/5", 1: "-1", 2: "2", 3: "-2", 4: "1"}
    assert {e: str(c) for e, c in poly.coeffs.items()} == worked
    rng = random.Random(SEED + 7)
    for L, M in SHAPES_CORE:
        shape = ModelShape(L, M)
        mom = _moments(rng, 2 * shape.K)
        psi = psi_minus(mom, shape)
        lower = ModelShape(L, M - 1) if M > 1 else None
        for _ in range(10):
            z = rational(f"{rng.choice([-5, -3, -2, -1, 1, 2, 3, 5, 7])}/{rng.randint(1, 4)}")
            shifted = miwa_negative_moments(mom, z, shape)
            t_lower = tau(shifted, lower) if lower else rational(1)
            assert psi.evaluate(z) == z ** (2 * shape.K) * t_lower, (L, M, z)
    _report(7, "negative-miwa", True, "worked polynomial + 10 z per shape")


def test_criterion_08_hirota_identity():
    rng = random.Random(SEED + 8)
    residuals = {}
    stability_ok = True
    for L, M in SHAPES_CORE:
        shape = ModelShape(L, M)
        plus = ModelShape(L, M + 1)
        cuts = (2 * shape.K, 2 * shape.K + 4)
        vals = []
        for _ in range(50):
            t = _moments(rng, 2 * shape.K)
            tp = _moments(rng, cuts[1] + 2 * plus.K)
            r_lo = hirota_residual(t, tp, shape, cuts[0])
            r_hi = hirota_residual(t, tp, shape, cuts[1])
            stability_ok = stability_ok and (r_lo == r_hi)
            vals.append(r_lo)
        residuals[(L, M)] = vals
        spec = transport_spectrum(t, tp, shape, cuts[0])
        side = {e: str(c) for e, c in spec.coeffs.items() if e != 0}
        print(f"  transport diagnostic ({L},{M}), last pair, non-z^0 channels: {side}")
    assert stability_ok, "truncation stability failed: residual depends on k_cut"
    print("  truncation stability at k_cut in {2K, 2K+4}: PASS")
    nonzero = {s: sum(1 for v in vals if not scalar_is_zero(v)) for s, vals in residuals.items()}
    ok = all(c == 0 for c in nonzero.values())
    samples = {s: str(next((v for v in vals if not scalar_is_zero(v)), 0)) for s, vals in residuals.items()}
    _report(8, "hirota-identity", ok, f"nonzero residuals per shape: {nonzero}")
    assert ok, (
        "[z^0](psi- psi+) does not vanish: nonzero counts per shape "
        f"{nonzero} out of 50 pairs each; sample residuals {samples}. "
        "The residual is k_cut-stable and exact; the asserted identity fails as stated."
    )


def test_criterion_09_normalization():
    shape22 = ModelShape(2, 2)
    uniform = NamedWeight.uniform(0, 1)
    for L, M in SHAPES_CORE:
        shape = ModelShape(L, M)
        assert r1_normalization(uniform.moments(2 * shape.K), shape) == M, (L, M)
    assert r1_normalization(NamedWeight.gaussian().moments(4), shape22) == 2
    val = correlation([rational("1/2")], uniform, shape22)
    ok = val == rational("3/8")
    _report(9, "normalization", ok, f"integral R_1 = M on all shapes; R_1(1/2) = {val}")
    assert ok


def test_criterion_10_monte_carlo_oracle():
    exact = {
        ("uniform:0,1", 2): 1 / 30,
        ("uniform:0,1", 3): 1 / 132300,
        ("gaussian", 2): 1.5 * math.pi,
        ("gaussian", 3): 11.25 * math.pi**1.5,
    }
    t0 = time.monotonic()
    worst_sigma = worst_rel = 0.0
    for weight in (NamedWeight.uniform(0, 1), NamedWeight.gaussian()):
        for M in (2, 3):
            rep = integrate_partition(
                weight, ModelShape(2, M), method="monte_carlo",
                budget=10**7, seed=SEED, threads=4,
            )
            truth = exact[(weight.label(), M)]
            dev = abs(rep.estimate - truth)
            assert dev <= 3 * rep.std_error, (weight.label(), M, rep)
            assert dev <= 0.01 * truth, (weight.label(), M, rep)
            worst_sigma = max(worst_sigma, dev / rep.std_error)
            worst_rel = max(worst_rel, dev / truth)
    elapsed = time.monotonic() - t0
    ok = elapsed <= 300.0
    _report(10, "monte-carlo-oracle", ok,
            f"worst {worst_sigma:.2f} sigma, {100 * worst_rel:.3f}% rel, {elapsed:.0f}s")
    assert ok, f"runtime {elapsed:.0f}s exceeds 5 min"


def test_criterion_11_determinism(tmp_path, monkeypatch):
    monkeypatch.setenv("LOGGAS_CACHE_DIR", str(tmp_path / "cache"))
    runs = [
        ("verify-confluent", ["--L", "2", "--M", "3", "--trials", "10", "--seed", "5"], 0),
        ("verify-toeplitz", ["--L", "2", "--M", "2", "--trials", "5", "--seed", "2"], 0),
        ("verify-adjunction", ["--L", "2", "--M", "2", "--trials", "5", "--seed", "4", "--no-cache"], 0),
        ("verify-hirota", ["--L", "2", "--M", "2", "--trials", "5", "--seed", "1"], 1),
        ("oracle", ["--L", "2", "--M", "2", "--weight", "uniform:0,1",
                    "--method", "monte_carlo", "--budget", "200000", "--seed", "9"], 0),
    ]
    for cmd, extra, want_code in runs:
        blobs = []
        for threads in (1, 4, 8):
            out = tmp_path / f"{cmd}-{threads}.json"
            argv = [cmd, *extra, "--threads", str(threads), "--out", str(out)]
            code = cli_main(argv)
            assert code == want_code, (cmd, threads, code)
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2], f"{cmd}: output differs across threads"
        json.loads(blobs[0])
    _report(11, "determinism", True, "5 subcommands byte-identical at threads 1/4/8")
