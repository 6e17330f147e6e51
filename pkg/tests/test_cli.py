import json
import subprocess
import sys

import pydot
import pytest

from garside_workbench.cli import main
from garside_workbench.partialmul import is_mixed_join_violation
from garside_workbench.artin import SimpleSet


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.fixture
def gen(tmp_path, capsys):
    def make(name, *params, file=None):
        path = tmp_path / (file or f"{name}-{'-'.join(params) or 'x'}.json")
        rc, _, err = run(capsys, "gen", name, *params, "-o", str(path))
        assert rc == 0, err
        return str(path)
    return make


# --- gen --------------------------------------------------------------------------

def test_gen_table1(capsys):
    rc, out, _ = run(capsys, "gen", "table1", "3-3-3-5")
    assert rc == 0
    G = json.loads(out)
    assert G["vertices"] == ["s1", "s2", "s3", "s4"]
    labels = [e["m"] for e in G["edges"]]
    assert labels.count(3) == 3 and labels.count(5) == 1


def test_gen_figure3(capsys):
    rc, out, _ = run(capsys, "gen", "figure3")
    G = json.loads(out)
    assert rc == 0 and len(G["vertices"]) == 7
    large = [e for e in G["edges"] if e["m"] != 2]
    assert len(large) == 6 and all(e["m"] == 4 for e in large)


def test_gen_surface(capsys):
    rc, out, _ = run(capsys, "gen", "surface", "--genus", "2")
    P = json.loads(out)
    assert rc == 0
    assert P["generators"] == ["a1", "b1", "a2", "b2"]
    assert P["relations"] == [[["a1", "b1", "a2", "b2"], ["a2", "b2", "a1", "b1"]]]


def test_gen_unknown(capsys):
    rc, _, err = run(capsys, "gen", "nonsense")
    assert rc == 2 and "unknown example" in err


def test_bad_arguments_exit_2(capsys):
    assert run(capsys, "artin", "sideways", "x.json")[0] == 2
    assert run(capsys)[0] == 2


# --- check-pmul --------------------------------------------------------------------

def test_check_pmul_free_passes(gen, capsys):
    rc, out, _ = run(capsys, "check-pmul", gen("free"))
    assert rc == 0 and "pass" in out


def test_check_pmul_broken_cancellation(tmp_path, capsys):
    T = {"elements": ["e", "u", "v", "w", "z"], "identity": "e",
         "products": [["e", x, x] for x in "euvwz"] + [[x, "e", x] for x in "uvwz"]
                     + [["u", "v", "z"], ["u", "w", "z"]]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(T))
    rc, out, _ = run(capsys, "check-pmul", str(p), "--format", "json")
    doc = json.loads(out)
    assert rc == 1
    conds = [v["condition"] for r in doc["reports"] for v in r["violations"]]
    assert "left_cancellative" in conds


def test_missing_and_malformed_input(tmp_path, capsys):
    rc, _, err = run(capsys, "check-pmul", str(tmp_path / "nope.json"))
    assert rc == 2 and "cannot read" in err
    p = tmp_path / "broken.json"
    p.write_text('{"elements": [')
    rc, _, err = run(capsys, "check-pmul", str(p))
    assert rc == 2 and "line 1" in err
    p.write_text('{"elements": ["e"]}')
    assert run(capsys, "check-pmul", str(p))[0] == 2


# --- artin ----------------------------------------------------------------------------

def test_artin_check_cyclic(gen, capsys):
    rc, out, err = run(capsys, "artin", "check", gen("table1", "3-3-3-4"))
    assert rc == 0, out + err


def test_artin_check_figure1(gen, capsys):
    rc, out, err = run(capsys, "artin", "check", gen("figure1"))
    assert rc == 0, out + err


def test_artin_negative_square(gen, capsys):
    rc, out, _ = run(capsys, "artin", "negative", gen("figure2"), "--format", "json")
    doc = json.loads(out)
    assert rc == 1
    fv = doc["first_violation"]
    assert fv["condition"] == "mixed_join"
    a, b, u, v = fv["witness"]
    assert {a, b} in ({"a", "b"}, {"u", "v"}) and {u, v} in ({"a", "b"}, {"u", "v"})
    rc, text, _ = run(capsys, "artin", "negative", gen("figure2"))
    assert "first violation: mixed_join" in text


def test_artin_negative_figure3(gen, capsys, tmp_path):
    path = gen("figure3")
    rc, out, _ = run(capsys, "artin", "negative", path, "--format", "json")
    doc = json.loads(out)
    assert rc == 1 and doc["first_violation"]["condition"] == "mixed_join"
    # the printed witness is a genuine violation of the table
    rc, out, _ = run(capsys, "artin", "build", path, "--override-graph-check", "--format", "json")
    T = SimpleSet.from_json(json.loads(out)["ucert"]).table()
    assert is_mixed_join_violation(T, *doc["first_violation"]["witness"])


def test_artin_check_square_without_override(gen, capsys):
    rc, out, _ = run(capsys, "artin", "check", gen("figure2"), "--format", "json")
    doc = json.loads(out)
    assert rc == 1
    assert [r["check"] for r in doc["reports"]] == ["gluing_hypotheses"]
    rc, out, _ = run(capsys, "artin", "check", gen("figure2"), "--format", "json", "--override-graph-check")
    assert rc == 1 and len(json.loads(out)["reports"]) == 3


def test_artin_missing_orientation(tmp_path, capsys):
    G = {"vertices": ["s1", "s2", "s3"], "edges": [{"u": "s1", "v": "s2", "m": 3},
                                                        {"u": "s2", "v": "s3", "m": 4}]}
    p = tmp_path / "b3.json"
    p.write_text(json.dumps(G))
    rc, out, _ = run(capsys, "artin", "check", str(p))
    assert rc == 1 and "orientation_missing" in out


def test_artin_enumeration_cap_is_an_environment_error(gen, capsys):
    rc, _, err = run(capsys, "artin", "check", gen("table1", "3-3-3-3-4"), "--max-elements", "20")
    assert rc == 2 and "exceeded" in err


def test_artin_build_outputs(gen, capsys, tmp_path):
    path = gen("table1", "3-3-3")
    out_path = tmp_path / "ucert.json"
    rc, out, _ = run(capsys, "artin", "build", path, "--format", "json", "--out", str(out_path))
    doc = json.loads(out)
    assert rc == 0
    assert all(r["verdict"] == "pass" for r in doc["reports"])
    cert = json.loads(out_path.read_text())
    assert cert == doc["ucert"]
    assert SimpleSet.from_json(cert).table().to_json() == cert["table"]
    rc, dot, _ = run(capsys, "artin", "build", path, "--format", "dot")
    assert rc == 0
    graphs = pydot.graph_from_dot_data(dot)
    assert graphs and len(graphs[0].get_nodes()) >= 2 * len(cert["members"])


def test_dot_unavailable_for_check(gen, capsys):
    rc, _, err = run(capsys, "artin", "check", gen("table1", "3-3-3"), "--format", "dot")
    assert rc == 2 and "dot output" in err


# --- pres and nf -------------------------------------------------------------------------

def test_pres_klein(gen, capsys, tmp_path):
    p = tmp_path / "klein.json"
    assert run(capsys, "gen", "surface", "--genus", "2", "--nonorientable", "-o", str(p))[0] == 0
    rc, out, _ = run(capsys, "pres", str(p), "--format", "json")
    doc = json.loads(out)
    assert rc == 0
    hyp = {h["check"]: h["verdict"] for h in doc["hypotheses"]}
    assert hyp["t5"] == "fail" and hyp["square"] == "pass"


def test_nf_klein(tmp_path, capsys):
    p = tmp_path / "klein.json"
    run(capsys, "gen", "surface", "--genus", "2", "--nonorientable", "-o", str(p))
    a = run(capsys, "nf", str(p), "a a")
    b = run(capsys, "nf", str(p), "b b")
    assert a[0] == b[0] == 0 and a[1] == b[1]
    rc, out, _ = run(capsys, "nf", str(p), "Δ", "--format", "json")
    nf = json.loads(out)["normal_form"]
    assert nf == {"inf": 1, "factors": []}
    rc, _, err = run(capsys, "nf", str(p), "q")
    assert rc == 2 and "unknown simple" in err


def test_nf_free(gen, capsys):
    rc, out, _ = run(capsys, "nf", gen("free"), "s1 s1'", "--format", "json")
    assert rc == 0 and json.loads(out)["normal_form"] == {"inf": 0, "factors": []}


def test_nf_on_graph_uses_cache(gen, capsys, tmp_path):
    path = gen("table1", "3-3-3")
    cache = tmp_path / "cache"
    cold = run(capsys, "nf", path, "s1 s2 s3 s1'", "--cache-dir", str(cache))
    assert any(cache.iterdir())
    warm = run(capsys, "nf", path, "s1 s2 s3 s1'", "--cache-dir", str(cache))
    assert cold == warm and cold[0] == 0


def test_nf_not_garside(gen, capsys):
    rc, out, _ = run(capsys, "nf", gen("figure2"), "a")
    assert rc == 1 and "not a Garside structure" in out


# --- cache and parallelism -----------------------------------------------------------------

def test_cache_hit_is_byte_identical(gen, capsys, tmp_path):
    path = gen("table1", "3-4-3-5")
    cache = tmp_path / "cache"
    cold = run(capsys, "artin", "build", path, "--format", "json", "--cache-dir", str(cache))
    files = sorted(cache.iterdir())
    assert len(files) == 1 and files[0].name.startswith("ucert-")
    head = json.loads(files[0].read_text())
    assert head["format"] == "garside-workbench-cache" and head["version"] == 1
    warm = run(capsys, "artin", "build", path, "--format", "json", "--cache-dir", str(cache))
    assert cold == warm
    uncached = run(capsys, "artin", "build", path, "--format", "json")
    assert uncached == cold


def test_corrupt_cache_is_ignored(gen, capsys, tmp_path):
    path = gen("table1", "3-3-4")
    cache = tmp_path / "cache"
    cold = run(capsys, "artin", "check", path, "--cache-dir", str(cache))
    for f in cache.iterdir():
        f.write_text("{not json")
    assert run(capsys, "artin", "check", path, "--cache-dir", str(cache)) == cold
    for f in cache.iterdir():
        doc = {"format": "garside-workbench-cache", "version": 0, "key": "x", "payload": {}}
        f.write_text(json.dumps(doc))
    assert run(capsys, "artin", "check", path, "--cache-dir", str(cache)) == cold


def test_env_cache_dir(gen, capsys, tmp_path, monkeypatch):
    cache = tmp_path / "envcache"
    monkeypatch.setenv("GARSIDE_CACHE", str(cache))
    assert run(capsys, "artin", "check", gen("table1", "3-3-3"))[0] == 0
    assert any(cache.iterdir())


def test_jobs_give_identical_output(gen, capsys):
    paths = [gen("table1", c) for c in ("3-3-3", "3-3-4", "3-3-3-3", "3-4-3-4")] + [gen("figure2")]
    one = run(capsys, "artin", "negative", *paths, "--format", "json", "--jobs", "1")
    many = run(capsys, "artin", "negative", *paths, "--format", "json", "--jobs", "3")
    assert one == many
    docs = json.loads(one[1])
    assert [d["input"] for d in docs] == paths
    assert one[0] == 1


def test_worst_exit_code_wins(gen, capsys, tmp_path):
    rc, out, err = run(capsys, "artin", "check", gen("table1", "3-3-3"), str(tmp_path / "missing.json"),
                       "--jobs", "1")
    assert rc == 2 and "pass" in out and "cannot read" in err


def test_module_entry_point(tmp_path):
    p = tmp_path / "free.json"
    r = subprocess.run([sys.executable, "-m", "garside_workbench", "gen", "free", "-o", str(p)],
                       capture_output=True, text=True)
    assert r.returncode == 0
    r = subprocess.run([sys.executable, "-m", "garside_workbench", "check-pmul", str(p), "--format", "json"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["verdict"] == "pass"
