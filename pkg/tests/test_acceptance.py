"""Acceptance criteria, one test each.

Every test appends a single ``CRITERION k: PASS|FAIL ...`` line to the
acceptance log (printed in the terminal summary) and then asserts.
"""

import filecmp
import itertools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction as Q
from importlib import resources

from helpers import (ORACLE_Y, random_focus_points, random_presentation, random_rational, random_region,
                     raster_components, segment_samples)
from vatcarto.cartography import (PiecewiseVertMap, Presentation, develop_atlas, l_map, monodromy_at, r_map,
                                  transition, verify_jump)
from vatcarto.cli import main
from vatcarto.cuts import (FocusError, SignChoice, complement_connected, cut_set, j_closed_form, j_direct,
                           order_focus, reduce_signs)
from vatcarto.document import BUNDLED
from vatcarto.region import Region, agl_equivalence, apply_affine, check_delzant, validate
from vatcarto.smoothing import build_embedding, check_embedding, limit_sequence
from vatcarto.strips import AdmissibleTriple, HalfStrip, check_admissible, construct_admissible, default_width
from vatcarto.zaffine import VertElement, ZAffine2

# pinned limits
J_CONFIGS, J_SECONDS = 200, 5.0
RASTER_CONFIGS, RASTER_N, RASTER_SECONDS = 100, 400, 30.0
REDUCE_CONFIGS, REDUCE_SAMPLES, REDUCE_SECONDS = 60, 500, 60.0
ALGEBRA_CONFIGS, ALGEBRA_POINTS = 50, 1000
EQUIV_CASES, EQUIV_BOUND = 100, 5
ADMISSIBLE_CONFIGS = 100
SMOOTH_GRID, SMOOTH_STEP, SEAM_TOL, C1_TOL, SMOOTH_SECONDS = 512, 1e-5, 1e-9, 1e-4, 10.0
LIMIT_STEPS, LIMIT_RESOLUTION = 4, 512

SQUARE = Region.box(0, 4, 0, 4)
ONE_FF = Presentation(SQUARE, order_focus([(2, 2)]), SignChoice((1,)))


def record(log, k, ok, detail):
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}"
    log.append(line)
    print(line)
    assert ok, line


def random_point(rng, region, avoid=()):
    """A random rational point of the bounding window that is not in ``avoid``."""
    while True:
        p = (random_rational(rng, int(region.x_min), int(region.x_max)), random_rational(rng, *ORACLE_Y))
        if p not in avoid:
            return p


def line_point(rng, focus):
    """A random point on a focus line, never a focus value itself."""
    while True:
        x = rng.choice(focus.xs())
        p = (x, random_rational(rng, -2, 6))
        if p not in focus.points:
            return p


def presentations(seed, count, n_max=6, simple=True):
    rng = random.Random(seed)
    return rng, [random_presentation(rng, n_max=n_max, simple=simple) for _ in range(count)]


def test_criterion_1_jump_equivalence(acceptance_log):
    start = time.perf_counter()
    rng, pres = presentations(101, J_CONFIGS)
    checked = mismatches = 0
    for p in pres:
        eps = [rng.choice((1, -1)) for _ in p.focus.points]
        pts = [random_point(rng, p.region, p.focus.points) for _ in range(10)]
        if len(p.focus):
            pts += segment_samples(p.focus) + [line_point(rng, p.focus) for _ in range(10)]
        for q in pts:
            checked += 1
            mismatches += j_direct(p.focus, eps, q) != j_closed_form(p.focus, eps, q)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < J_SECONDS
    record(acceptance_log, 1, ok, f"{J_CONFIGS} configs, {checked} points, {mismatches} mismatches, "
                                  f"{elapsed:.2f}s (limit {J_SECONDS}s)")


def test_criterion_2_connectivity_oracle(acceptance_log):
    start = time.perf_counter()
    rng, pres = presentations(202, RASTER_CONFIGS)
    disagreements, disconnected = [], 0
    for i, p in enumerate(pres):
        eps = [rng.choice((1, -1)) for _ in p.focus.points]
        oracle = raster_components(p.region, p.focus, eps, n=RASTER_N) == 1
        disconnected += not oracle
        if complement_connected(p.focus, eps) != oracle:
            disagreements.append(i)
    elapsed = time.perf_counter() - start
    ok = not disagreements and elapsed < RASTER_SECONDS and 0 < disconnected < RASTER_CONFIGS
    record(acceptance_log, 2, ok, f"{RASTER_CONFIGS} configs on {RASTER_N}x{RASTER_N}, "
                                  f"{disconnected} disconnected, {len(disagreements)} disagreements, "
                                  f"{elapsed:.2f}s (limit {RASTER_SECONDS}s)")


def _reduce_samples(rng, p):
    pts = segment_samples(p.focus)
    while len(pts) < REDUCE_SAMPLES:
        pts.append(line_point(rng, p.focus) if rng.random() < 0.7 else random_point(rng, p.region, p.focus.points))
    return pts


def _satisfies_reduction(p, eps, cand, samples):
    """Complement grows, j agrees, complement connected."""
    before, after = cut_set(p.focus, eps), cut_set(p.focus, cand)
    for q in samples:
        if not before.contains(q) and after.contains(q):
            return False
        if j_direct(p.focus, eps, q) != j_direct(p.focus, cand, q):
            return False
    return complement_connected(p.focus, cand)


def test_criterion_3_reduction(acceptance_log):
    start = time.perf_counter()
    rng = random.Random(303)
    failures, non_unique, nontrivial = [], [], 0
    for i in range(REDUCE_CONFIGS):
        while True:
            region = random_region(rng)
            n = rng.randint(1, 5)
            try:
                focus = order_focus(random_focus_points(rng, region, n, share=0.8), 0, region)
            except FocusError:
                continue
            break
        p = Presentation(region, focus, SignChoice((1,) * n))
        eps = SignChoice(tuple(rng.choice((1, -1)) for _ in range(n)))
        hat = reduce_signs(focus, eps)
        nontrivial += hat != eps
        samples = _reduce_samples(rng, p)
        if not _satisfies_reduction(p, eps, hat, samples) or reduce_signs(focus, hat) != hat:
            failures.append(i)
            continue
        good = [c for c in itertools.product((1, -1), repeat=n) if _satisfies_reduction(p, eps, c, samples)]
        if good != [tuple(hat)]:
            non_unique.append(i)
    elapsed = time.perf_counter() - start
    ok = not failures and not non_unique and nontrivial > 0 and elapsed < REDUCE_SECONDS
    record(acceptance_log, 3, ok, f"{REDUCE_CONFIGS} configs (n <= 5, {nontrivial} needing reduction), "
                                  f"{REDUCE_SAMPLES} samples each, {len(failures)} property failures, "
                                  f"{len(non_unique)} non-unique, {elapsed:.2f}s (limit {REDUCE_SECONDS}s)")


def test_criterion_4_transition_algebra(acceptance_log):
    rng, pres = presentations(404, ALGEBRA_CONFIGS)
    bad = {"identity": 0, "round_trip": 0, "commute": 0, "fixed_line": 0}
    for p in pres:
        eps0 = p.ref_signs
        t, same = transition(p, eps0)
        bad["identity"] += not (t.is_identity() and same.region.same_set(p.region))
        hat = SignChoice(tuple(rng.choice((1, -1)) for _ in eps0))
        _, image = transition(p, hat)
        _, back = transition(image, eps0)
        bad["round_trip"] += not back.region.same_set(p.region)
        maps = {}
        for i in p.focus.indices:
            maps[("l", i)] = l_map(i, p.focus, eps0, hat, p.global_sign)
            maps[("r", i)] = r_map(i, p.focus, eps0, hat, p.global_sign)
            x = p.focus.points[p.focus.slot(i)][0]
            for y in range(-4, 8):
                for m in (maps[("l", i)], maps[("r", i)]):
                    bad["fixed_line"] += m((x, Q(y, 2))) != (x, Q(y, 2))
        keys = list(maps)
        for _ in range(ALGEBRA_POINTS if keys else 0):
            a, b = rng.choice(keys), rng.choice(keys)
            q = random_point(rng, p.region)
            bad["commute"] += maps[a](maps[b](q)) != maps[b](maps[a](q))
    ok = not any(bad.values())
    record(acceptance_log, 4, ok, f"{ALGEBRA_CONFIGS} presentations, {ALGEBRA_POINTS} commutation points each, "
                                  + ", ".join(f"{k} failures {v}" for k, v in bad.items()))


def _mutations(atlas, rng):
    """Every piece replaced once by a different vertical map."""
    for c in range(len(atlas.pieces)):
        h = VertElement(rng.choice((-1, 1, 2)), 1, 0) if rng.random() < 0.5 else VertElement(0, 1, Q(1, 3))
        pieces = list(atlas.pieces)
        pieces[c] = h.to_affine() @ pieces[c]
        yield PiecewiseVertMap(atlas.breaks, tuple(pieces))


def test_criterion_5_jump_and_monodromy(acceptance_log):
    rng, pres = presentations(505, 60)
    atlases = violations = mutants = missed = 0
    for p in pres:
        eps = reduce_signs(p.focus, [rng.choice((1, -1)) for _ in p.focus.points])
        atlas = develop_atlas(p, eps)
        atlases += 1
        violations += len(verify_jump(atlas, p, eps).violations)
        if len(p.focus):
            for bad in _mutations(atlas, rng):
                mutants += 1
                missed += verify_jump(bad, p, eps).ok
    holonomy_bad = []
    cases = 0
    for r, sgn in itertools.product((1, 2), (1, -1)):
        square = Presentation(SQUARE, order_focus([(2, 2)], multiplicities=[r]), SignChoice((1,)), sgn)
        for eps in ([1], [-1]):
            cases += 1
            if monodromy_at(square, eps, 1) != ((1, 0), (r * sgn, 1)):
                holonomy_bad.append((r, sgn, eps))
        # isolated values inside random multi-point presentations
        for p in presentations(506 + r, 15, n_max=4, simple=False)[1]:
            p = Presentation(p.region, p.focus, p.ref_signs, sgn)
            for i in p.focus.indices:
                x = p.focus.points[p.focus.slot(i)][0]
                if len(p.focus.on_line(x)) != 1:
                    continue
                rc = p.focus.multiplicities[p.focus.slot(i)]
                for eps in (p.ref_signs, SignChoice((1,) * len(p.focus))):
                    cases += 1
                    if monodromy_at(p, eps, i) != ((1, 0), (rc * sgn, 1)):
                        holonomy_bad.append((i, rc, sgn))
    ok = violations == 0 and missed == 0 and mutants > 0 and not holonomy_bad
    record(acceptance_log, 5, ok, f"{atlases} atlases with {violations} violations, {mutants} mutants "
                                  f"with {missed} missed, {cases} monodromy cases with {len(holonomy_bad)} wrong")


def test_criterion_6_worked_example(acceptance_log):
    _, image = transition(ONE_FF, [-1])
    verts = sorted((int(x), int(y)) for x, y in image.region.vertices())
    want = sorted([(0, 0), (2, 0), (4, 2), (4, 6), (2, 4), (0, 4)])
    delz = check_delzant(image.region, skip_x=[2])
    ok = verts == want and delz.ok and delz.checked == 4 and validate(image.region).ok
    record(acceptance_log, 6, ok, f"vertices {verts}, Delzant away from x = 2: {delz.ok} "
                                  f"({delz.checked} corners checked)")


def _random_lattice_polygon(rng):
    while True:
        pts = sorted({(rng.randint(0, 6), rng.randint(0, 6)) for _ in range(rng.randint(3, 9))})
        hull = _hull(pts)
        if len(hull) >= 3:
            return Region.from_polygon(hull)


def _hull(pts):
    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    out = []
    for seq in (pts, pts[::-1]):
        part = []
        for p in seq:
            while len(part) >= 2 and turn(part[-2], part[-1], p) <= 0:
                part.pop()
            part.append(p)
        out += part[:-1]
    return out


def test_criterion_7_agl_recovery(acceptance_log):
    rng = random.Random(707)
    unimodular = [((a, b), (c, d)) for a, b, c, d in itertools.product(range(-EQUIV_BOUND, EQUIV_BOUND + 1), repeat=4)
                  if a * d - b * c in (1, -1)]
    failures = 0
    for _ in range(EQUIV_CASES):
        P = _random_lattice_polygon(rng)
        h = ZAffine2(rng.choice(unimodular), (rng.randint(-EQUIV_BOUND, EQUIV_BOUND),
                                              rng.randint(-EQUIV_BOUND, EQUIV_BOUND)))
        image = apply_affine(P, h)
        found = agl_equivalence(P, image)
        failures += found is None or not apply_affine(P, found).same_set(image)
    record(acceptance_log, 7, failures == 0, f"{EQUIV_CASES} random (P, h) with |entries| <= {EQUIV_BOUND}, "
                                             f"{failures} failures")


def test_criterion_8_admissibility(acceptance_log):
    rng, pres = presentations(808, ADMISSIBLE_CONFIGS)
    rejected = halving_failures = implication_failures = hand_built = 0
    for p in pres:
        eps = reduce_signs(p.focus, [rng.choice((1, -1)) for _ in p.focus.points])
        t = construct_admissible(p.region, p.focus, eps)
        rejected += not check_admissible(t, p.region, p.focus).ok
        for k in range(1, 5):
            halving_failures += not check_admissible(t.halved(k), p.region, p.focus).ok
        # standard strips for arbitrary signs: admissible only when the signs are monotone
        raw = SignChoice(tuple(rng.choice((1, -1)) for _ in p.focus.points))
        widths = {x: default_width(p.region, p.focus, x) for x in p.focus.xs()}
        for k in range(4):
            triple = AdmissibleTriple(tuple(HalfStrip.standard(c, e, widths[c[0]] / 2 ** k)
                                            for c, e in zip(p.focus.points, raw)))
            hand_built += 1
            if check_admissible(triple, p.region, p.focus).ok and not complement_connected(p.focus, raw):
                implication_failures += 1
    ok = rejected == 0 and halving_failures == 0 and implication_failures == 0
    record(acceptance_log, 8, ok, f"{ADMISSIBLE_CONFIGS} configs, {rejected} constructed triples rejected, "
                                  f"{halving_failures} halving failures, {hand_built} hand-built triples with "
                                  f"{implication_failures} admissible but non-monotone")


def test_criterion_9_smoothing(acceptance_log):
    start = time.perf_counter()
    F = build_embedding(ONE_FF, [-1])
    rep = check_embedding(F, grid=SMOOTH_GRID, step=SMOOTH_STEP)
    elapsed = time.perf_counter() - start
    ok = (rep.seam_discontinuity < SEAM_TOL and rep.c1_defect < C1_TOL and rep.injectivity_violations == 0
          and rep.agreement_violations == 0 and rep.x_violations == 0 and elapsed < SMOOTH_SECONDS)
    record(acceptance_log, 9, ok, f"grid {SMOOTH_GRID}x{SMOOTH_GRID}: seam {rep.seam_discontinuity:.2e} "
                                  f"(< {SEAM_TOL}), C1 {rep.c1_defect:.2e} (< {C1_TOL}), injectivity "
                                  f"{rep.injectivity_violations}, agreement {rep.agreement_violations}, "
                                  f"{elapsed:.2f}s (limit {SMOOTH_SECONDS}s)")


def test_criterion_10_direct_limit(acceptance_log):
    rep = limit_sequence(ONE_FF, [-1], LIMIT_STEPS, resolution=LIMIT_RESOLUTION)
    areas = [s.discrepancy for s in rep.steps]
    strictly = all(b < a for a, b in zip(areas, areas[1:]))
    ok = len(areas) == LIMIT_STEPS + 1 and rep.nested and strictly and areas[-1] < areas[0] / 8
    record(acceptance_log, 10, ok, f"{LIMIT_STEPS} halvings, nested {rep.nested}, areas "
                                   + ", ".join(f"{a:.4f}" for a in areas)
                                   + f", final/initial {areas[-1] / areas[0]:.4f} (< 0.125)")


SUBCOMMANDS = {
    "validate": [],
    "cuts": [],
    "family": [],
    "transform": [],
    "strips": [],
    "smooth": ["--grid", "64"],
    "equiv": ["--other", None],
    "render": [],
}


def test_criterion_11_cli_corpus(acceptance_log, tmp_path, capsys):
    wrong = []
    runs = 0
    for name in BUNDLED:
        path = str(resources.files("vatcarto").joinpath(f"data/{name}.json"))
        for cmd, extra in SUBCOMMANDS.items():
            for fmt in ([], ["--json"]):
                argv = [cmd, "-i", path] + [path if a is None else a for a in extra] + fmt
                code = main(argv)
                capsys.readouterr()
                runs += 1
                if code != 0:
                    wrong.append((name, cmd, code))
    # documented failure codes
    broken = json.loads(resources.files("vatcarto").joinpath("data/square_empty.json").read_text())
    broken["presentation"]["region"]["upper"]["ys"] = ["-1", "-1"]
    bad_path = tmp_path / "broken.json"
    bad_path.write_text(json.dumps(broken))
    one = str(resources.files("vatcarto").joinpath("data/square_one_ff.json"))
    two = str(resources.files("vatcarto").joinpath("data/two_ff_one_line.json"))
    for argv, want in (
        (["validate", "-i", str(bad_path)], 1),
        (["strips", "-i", two, "--eps", "+,-"], 1),
        (["validate", "-i", str(tmp_path / "missing.json")], 2),
        (["transform", "-i", one, "--eps", "+,+"], 2),
    ):
        code = main(argv)
        capsys.readouterr()
        runs += 1
        if code != want:
            wrong.append((argv[0], argv[-1], code))
    # byte-stable SVG: twice in process and once in a fresh interpreter
    unstable = []
    for name in BUNDLED:
        path = str(resources.files("vatcarto").joinpath(f"data/{name}.json"))
        outs = [tmp_path / f"{name}-{k}.svg" for k in range(3)]
        for out in outs[:2]:
            main(["render", "-i", path, "--family", "--out", str(out)])
        subprocess.run([sys.executable, "-m", "vatcarto.cli", "render", "-i", path, "--family", "--out",
                        str(outs[2])], check=True, capture_output=True)
        capsys.readouterr()
        if not all(filecmp.cmp(outs[0], o, shallow=False) for o in outs[1:]):
            unstable.append(name)
    ok = not wrong and not unstable
    record(acceptance_log, 11, ok, f"{len(BUNDLED)} documents, {runs} runs, {len(wrong)} wrong exit codes, "
                                   f"{len(unstable)} unstable SVGs")
