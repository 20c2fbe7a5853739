#!/usr/bin/env python3
"""Smoke test for the sullivan_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/,
stages it as an importable module, and exercises the main surfaces.

    cargo build -p sullivan-python [--release]
    python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import sys
import tempfile

REPO = pathlib.Path(__file__).resolve().parent.parent


def stage_module() -> pathlib.Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libsullivan_py.so", "sullivan_py.so", "libsullivan_py.dylib")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p sullivan-python")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="sullivan_py_"))
    shutil.copy2(built, stage / "sullivan_py.so")
    return stage


sys.path.insert(0, str(stage_module()))
import sullivan_py  # noqa: E402

HEISENBERG = """\
gen v1 1
gen v2 1
gen v3 1
maxdeg 4
diff v3 = v1*v2
"""

TWO_STEP = """\
gen z 1
fiber w1 2
fiber w2 2
maxdeg 5
diff w2 = z*w1
"""


def check(label, got, expected):
    if got != expected:
        sys.exit(f"FAIL {label}: got {got!r}, expected {expected!r}")
    print(f"ok {label}: {got!r}")


p = sullivan_py.Presentation(HEISENBERG)
check("validate", (p.validate()["d_squared_zero"], p.is_minimal()), (True, True))
check("cohomology dims", p.cohomology_dims(3), [1, 2, 2, 1])
check("apply_d", p.apply_d("v1*v3"), "0")
check("xi of a generator", p.xi("v1"), "v1")
lie = p.fundamental_lie()
check("bracket [x1,x2] = -x3", lie["brackets"], [[0, 1, ["0", "0", "-1"]]])
check("lcs", p.lcs(3)["rows"], [[1, 2], [2, 1], [3, 0]])

wedge = sullivan_py.build_model("h 1 2\n", formal=True, max_stage=4)
cumulative = [entry["cumulative_dim"] for entry in wedge["stage_log"]]
check("wedge tower", cumulative, [2, 3, 5, 8, 14])
check("wedge not stabilized", wedge["stabilized"], False)

sphere = sullivan_py.build_model("h 2 1\n", formal=True, max_degree=7)
model = sullivan_py.Presentation(sphere["model"])
check("sphere model dims", model.cohomology_dims(6), [1, 0, 1, 0, 0, 0, 0])

rs = sullivan_py.RelativePresentation(TWO_STEP)
check("filtration", rs.filtration()["assignment"], {"w1": 0, "w2": 1})
hol = rs.holonomy(2)
check("holonomy matrix", hol["matrices"]["z"], [["0", "0"], ["1", "0"]])
check("nilpotency index", hol["nilpotency"]["z"], 2)
check("exp action", rs.exp_action(["1"], 2, ["0", "1"]), ["1", "1"])
lemma = rs.lemma31(trials=100, seed=0)
check("lemma trials", (lemma["trials"], lemma["passed"]), (100, 100))

check("interval integral", sullivan_py.integrate(1, "dt1"), "-1")
check("form d", sullivan_py.form_d(2, "t1*t2 dt1"), "-1*t1 dt1^dt2")
check("face", sullivan_py.face(1, "t1", 0), "1")
# terms render in the canonical order (exponent vectors ascending)
check("degeneracy", sullivan_py.degeneracy(1, "t1", 1), "t2 + t1")

circle = {
    "complex": {"simplices": {"0": ["c0"], "1": ["c1"]}, "faces": {"c1": ["c0", "c0"]}},
    "degree": 1,
    "family": {"c1": "dt1"},
}
report = sullivan_py.apl_check(json.dumps(circle))
check("circle cochain", report["cochain"]["c1"], "-1")
check("cochain identity", report["coboundary_identity"], True)

print("smoke test passed")
