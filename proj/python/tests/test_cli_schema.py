import json

import jsonschema
import pytest

import stratkit


@pytest.fixture(scope="module")
def validator(schema):
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


def run_json(*args):
    code, out, _ = stratkit.run_cli(*args, "--format", "json")
    report = json.loads(out)
    assert report["exitCode"] == code
    return report


def invocations(corpus, fixtures_dir):
    for f in corpus["formulas"]:
        yield ("parse", f)
        yield ("stratify", f)
        yield ("stratify", f, "--mode", "typed")
        yield ("classify", f)
        yield ("translate", f)
    for f in corpus["hf"]:
        yield ("hf-eval", f, "--model", "V3", "--let", "x={{}}", "--let", "y={}", "--let", "z={}")
    for fixture in ("two_chain.kripke", "growing.kripke"):
        for f in corpus["sequents"] + corpus["classical"]:
            yield ("kripke-check", f, "--fixture", str(fixtures_dir / fixture))
    yield ("bf-demo", "iso", "--steps", "80")
    yield ("bf-demo", "selfembed", "--steps", "120", "--bound", "1/2")
    yield ("bf-demo", "family", "--depth", "2", "--steps", "60")
    yield ("bf-demo", "equalizer", "--seed", "7")
    yield ("bf-demo", "tarski")
    # error envelopes
    yield ("parse", "x in")
    yield ("hf-eval", "x = x", "--model", "V9")
    yield ("translate", "x in y", "--sort", "x=Q(U)")


def test_every_report_matches_the_schema(corpus, fixtures_dir, validator):
    seen = set()
    for args in invocations(corpus, fixtures_dir):
        report = run_json(*args)
        errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
        assert not errors, f"{args}: {errors[0].message}"
        seen.add((report["command"], report["status"]))
    commands = {c for c, _ in seen}
    assert commands == {"parse", "stratify", "classify", "hf-eval", "kripke-check", "translate", "bf-demo"}
    assert {s for _, s in seen} == {"ok", "negative", "error"}


def test_schema_rejects_malformed_reports(validator):
    good = run_json("stratify", "x in y")
    assert validator.is_valid(good)
    bad = dict(good, exitCode=1)
    assert not validator.is_valid(bad)
    bad = json.loads(json.dumps(good))
    bad["result"]["types"]["x"] = -1
    assert not validator.is_valid(bad)
    bad = json.loads(json.dumps(good))
    del bad["result"]["max"]
    assert not validator.is_valid(bad)
