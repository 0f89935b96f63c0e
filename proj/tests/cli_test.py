"""End-to-end checks of the command-line front end."""
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

CLI = os.environ.get("FONTAINE_CLI") or sys.argv.pop(1)
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCHEMAS = os.path.join(ROOT, "docs", "schemas")


def load_schemas():
    out, registry = {}, Registry()
    for name in os.listdir(SCHEMAS):
        with open(os.path.join(SCHEMAS, name)) as f:
            s = json.load(f)
        out[s["properties"]["schema"]["const"]] = s
        registry = registry.with_resource(s["$id"], Resource.from_contents(s))
    return out, registry


SCHEMA, REGISTRY = load_schemas()


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("FONTAINE_OFFLINE", None)
    e.pop("FONTAINE_CACHE_DIR", None)
    e.update(env or {})
    p = subprocess.run([CLI, *args], cwd=ROOT, env=e, capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


def validate(doc):
    jsonschema.Draft202012Validator(SCHEMA[doc["schema"]], registry=REGISTRY).validate(doc)
    return doc


def lines(out):
    return [validate(json.loads(l)) for l in out.splitlines() if l.strip()]


class Classify(unittest.TestCase):
    def test_fontaine_with_pack(self):
        rc, out, _ = run("classify", "--field", "data/fields/q_sqrt5.json", "--pack", "data/packs/2.2.5.1.pack.json")
        self.assertEqual(rc, 0)
        (v,) = lines(out)
        self.assertEqual((v["outcome"], v["path"]), ("Fontaine", "OnePrime"))
        self.assertEqual(v["evidence"]["step8"]["od"], 15)

    def test_even_discriminant_is_a_conclusive_rejection(self):
        rc, out, _ = run("classify", "--field", "data/fields/q_sqrt2.json")
        self.assertEqual(rc, 0)
        (v,) = lines(out)
        self.assertEqual((v["outcome"], v["step"], v["reason"]), ("Rejected", 0, "hypothesis_k"))

    def test_missing_pack_is_inconclusive(self):
        rc, out, _ = run("classify", "--field", "data/fields/q_sqrt5.json")
        self.assertEqual(rc, 2)
        self.assertEqual(lines(out)[0]["reason"], "missing_extension_data")

    def test_usage_and_errors(self):
        self.assertEqual(run("classify")[0], 64)
        self.assertEqual(run("--tower-cap", "3", "classify", "--field", "data/fields/q.json")[0], 64)
        self.assertEqual(run("--format", "yaml", "classify", "--field", "data/fields/q.json")[0], 64)
        self.assertEqual(run("nonsense")[0], 64)
        rc, _, err = run("classify", "--field", "data/fields/does_not_exist.json")
        self.assertEqual(rc, 1)
        self.assertIn("ParseError", err)

    def test_text_and_csv(self):
        rc, out, _ = run("--format", "text", "classify", "--field", "data/fields/q_sqrt2.json")
        self.assertEqual(rc, 0)
        self.assertIn("hypothesis_k", out)
        rc, out, _ = run("--format", "csv", "classify", "--field", "data/fields/q_sqrt2.json")
        self.assertEqual(out.splitlines()[0], "label,degree,outcome,path,step,reason")


class Batch(unittest.TestCase):
    def test_deg2_tally_row(self):
        rc, out, _ = run("batch", "--input", "data/corpus/deg2.jsonl", "--packs", "data/packs", "--tally")
        self.assertEqual(rc, 0)
        (row,) = validate(json.loads(out))["rows"]
        got = tuple(row[k] for k in ("one_prime_D1", "two_prime_D1", "two_prime_D2", "three_prime_D1", "three_prime_D2"))
        self.assertEqual(got, (3, 1, 1, 0, 0))
        self.assertEqual(row["fields"], 16)

    def test_parallelism_does_not_change_output(self):
        outs = {run("--format", "json", "batch", "--input", "data/corpus/deg3.jsonl", "--packs", "data/packs",
                    "--parallelism", str(n))[1] for n in (1, 2, 5)}
        self.assertEqual(len(outs), 1)
        self.assertEqual(len(lines(outs.pop())), 64)

    def test_tally_of_a_verdict_stream(self):
        _, out, _ = run("batch", "--input", "data/corpus/deg2.jsonl", "--packs", "data/packs")
        with tempfile.NamedTemporaryFile("w", suffix=".jsonl", delete=False) as f:
            f.write(out)
        try:
            rc, tal, _ = run("tally", "--verdicts", f.name)
            _, direct, _ = run("batch", "--input", "data/corpus/deg2.jsonl", "--packs", "data/packs", "--tally")
            self.assertEqual(rc, 0)
            self.assertEqual(validate(json.loads(tal)), json.loads(direct))
            rc, csv, _ = run("--format", "csv", "tally", "--verdicts", f.name)
            self.assertTrue(csv.startswith("deg,fields,one_prime_D1,"))
        finally:
            os.unlink(f.name)

    def test_config_overrides_flags(self):
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
            json.dump({"format": "csv"}, f)
        try:
            _, out, _ = run("--config", f.name, "--format", "json", "classify", "--field", "data/fields/q_sqrt2.json")
            self.assertTrue(out.startswith("label,"))
        finally:
            os.unlink(f.name)
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
            json.dump({"colour": "red"}, f)
        try:
            self.assertEqual(run("--config", f.name, "classify", "--field", "data/fields/q.json")[0], 64)
        finally:
            os.unlink(f.name)


class Other(unittest.TestCase):
    def test_sort_word(self):
        rc, out, _ = run("--format", "text", "sort-word", "Z2,mu2", "--primes", "1")
        self.assertEqual((rc, out.strip()), (0, "mu2,Z2"))
        rc, out, _ = run("sort-word", "Z2,mu2", "--primes", "1")
        self.assertEqual(validate(json.loads(out))["sorted"], "mu2,Z2")
        self.assertEqual(run("sort-word", "Z3", "--primes", "1")[0], 64)

    def test_fetch_offline(self):
        rc, out, _ = run("fetch", "--degree", "2", "--max-rd", "9.5", "--offline")
        self.assertEqual(rc, 0)
        self.assertEqual(validate(json.loads(out))["count"], 16)
        rc, out, _ = run("fetch", "--degree", "3", "--max-rd", "9.5", env={"FONTAINE_OFFLINE": "1"})
        self.assertEqual(json.loads(out)["count"], 64)
        with tempfile.TemporaryDirectory() as d:
            rc, _, err = run("fetch", "--degree", "2", "--max-rd", "9.5", "--offline", "--cache-dir", d)
            self.assertEqual(rc, 1)
            self.assertIn("NetworkError", err)

    def test_fixtures_verify(self):
        rc, out, _ = run("fixtures-verify")
        self.assertEqual(rc, 0)
        self.assertTrue(validate(json.loads(out))["ok"])

    def test_fixture_documents_match_their_schemas(self):
        for sub in ("data/fields", "data/packs"):
            for name in sorted(os.listdir(os.path.join(ROOT, sub))):
                with open(os.path.join(ROOT, sub, name)) as f:
                    with self.subTest(name=name):
                        validate(json.load(f))


if __name__ == "__main__":
    unittest.main()
