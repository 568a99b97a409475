"""End-to-end checks of the command-line tool: outputs, exit codes, reproducibility."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

CLI = None


def run(*args, cwd=None):
    p = subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)
    return p.returncode, p.stdout, p.stderr


def read(path):
    with open(path) as f:
        return f.read()


def effective_config(stderr):
    for line in stderr.splitlines():
        if line.startswith("effective config: "):
            return line[len("effective config: "):]
    raise AssertionError("no effective config line in:\n" + stderr)


def status(report, name):
    for c in report["checks"]:
        if c["check"] == name:
            return c
    raise AssertionError("missing check " + name)


class Curve(unittest.TestCase):
    def test_lame_g1(self):
        code, out, _ = run("--json", "curve", "--family", "lame", "--g", "1", "--g1", "4", "--g0", "8")
        self.assertEqual(code, 0)
        j = json.loads(out)
        self.assertEqual(j["F_coefficients"], ["-2", "1", "0", "1"])
        self.assertEqual(j["family"], "lame")
        self.assertEqual(j["genus"], 1)

    def test_trig_alpha1_zero_is_input_error(self):
        code, _, err = run("curve", "--family", "trig", "--g", "1", "--alpha1", "0")
        self.assertEqual(code, 2)
        self.assertIn("alpha1", err)

    def test_cos_constant_term(self):
        code, out, _ = run("--json", "curve", "--family", "cos", "--g", "1", "--alpha0", "0", "--alpha1", "1")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["F_coefficients"][0], "1/4")

    def test_out_file_matches_stdout(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "curve.json")
            code, out, _ = run("--json", "curve", "--family", "cos", "--g", "2", "--out", path)
            self.assertEqual(code, 0)
            self.assertEqual(read(path), out)
            self.assertEqual(os.listdir(d), ["curve.json"])

    def test_bad_rational_and_unknown_flag(self):
        self.assertEqual(run("curve", "--family", "trig", "--alpha0", "1/0")[0], 2)
        self.assertEqual(run("curve", "--family", "trig", "--bogus", "1")[0], 2)
        self.assertEqual(run("curve", "--family", "nope")[0], 2)
        self.assertEqual(run("curve", "--family", "cos", "--g2", "5")[0], 2)
        self.assertEqual(run()[0], 2)


class Reports(unittest.TestCase):
    def test_pair_seeded_and_reproducible(self):
        code, out, err = run("--json", "pair", "--family", "trig", "--g", "2", "--seed", "7")
        self.assertEqual(code, 0)
        j = json.loads(out)
        c = status(j, "commutator [L, M] = 0")
        self.assertEqual(c["status"], "pass")
        self.assertEqual(c["residual_max"], "0")
        # The printed effective config reproduces the run byte for byte.
        config = effective_config(err)
        self.assertIn("--seed 7", config)
        code2, out2, _ = run("--json", *config.split())
        self.assertEqual(code2, 0)
        self.assertEqual(out2, out)

    def test_identical_invocations_are_byte_identical(self):
        a = run("--json", "pair", "--family", "elliptic", "--g", "2", "--alpha0", "1/3", "--g0", "3")
        b = run("--json", "pair", "--family", "elliptic", "--g", "2", "--alpha0", "1/3", "--g0", "3")
        self.assertEqual(a, b)
        self.assertNotIn("timing_seconds", a[1])
        self.assertIn("timing_seconds", run("--json", "--timing", "lax-check")[1])

    def test_degenerate_elliptic_fails_hard(self):
        code, out, _ = run("--json", "pair", "--family", "elliptic", "--g", "1", "--alpha0", "5", "--g2", "-16")
        self.assertEqual(code, 1)
        self.assertEqual(status(json.loads(out), "pipeline")["status"], "fail")

    def test_dixmier(self):
        code, out, _ = run("--json", "dixmier", "--h", "3/2")
        self.assertEqual(code, 0)
        j = json.loads(out)
        self.assertEqual(status(j, "[L_D, L~_D] = 0")["status"], "pass")
        scalar = status(j, "L~_D^2 - L_D^3 is a scalar")
        self.assertEqual(scalar["details"], "value -3/2")
        self.assertEqual(status(j, "L~_D^2 - L_D^3 = h (as printed)")["status"], "discrepancy")

    def test_lame_and_lax(self):
        code, out, _ = run("--json", "lame", "--g", "3", "--seed", "2")
        self.assertEqual(code, 0)
        j = json.loads(out)
        self.assertEqual(status(j, "4F = 4(z-u)Q^2 - Q'^2 + 2QQ'' is x-free")["status"], "pass")
        code, out, _ = run("--json", "lax-check")
        self.assertEqual(code, 0)
        j = json.loads(out)
        self.assertTrue(all(c["status"] == "pass" for c in j["checks"]))
        self.assertEqual(j["orders"]["[A3, L4]"], 2)

    def test_thm11_constraint(self):
        code, out, _ = run("--json", "thm11", "--b", "1", "--g2", "0")
        self.assertEqual(code, 0)
        j = json.loads(out)
        main = [b for b in j["branches"] if b["solution"].get("p") == "-10"]
        self.assertEqual(len(main), 1)
        self.assertEqual(main[0]["solution"]["q"], "-40")
        self.assertEqual(len(main[0]["constraints"]), 1)
        self.assertTrue(any(c["check"].startswith("constraint") for c in j["checks"]))
        self.assertEqual(run("thm11", "--c", "1")[0], 2)


class Simulate(unittest.TestCase):
    def sim(self, d, config, *extra):
        path = os.path.join(d, "config.json")
        with open(path, "w") as f:
            json.dump(config, f)
        out = os.path.join(d, "out")
        return (*run("simulate", "--config", path, "--out", out, *extra), out)

    def test_outputs(self):
        with tempfile.TemporaryDirectory() as d:
            code, out, _, od = self.sim(d, {"g": 1, "T": 0.2, "snapshot_every": 0.1, "track_Q": True})
            self.assertEqual(code, 0)
            self.assertIn("eq6_residual_max", out)
            files = sorted(os.listdir(od))
            self.assertEqual(files, ["config.json", "diagnostics.csv", "snap_t0.0000.csv",
                                     "snap_t0.1000.csv", "snap_t0.2000.csv"])
            lines = read(os.path.join(od, "diagnostics.csv")).splitlines()
            self.assertEqual(lines[0], "t,mass_V,mass_W,max_abs_V,peak_count,eq6_residual_max")
            self.assertEqual(len(lines), 4)
            snap = read(os.path.join(od, "snap_t0.1000.csv")).splitlines()
            self.assertEqual(snap[0], "x,V,W,q0")
            self.assertEqual(len(snap), 1025)
            first = read(os.path.join(od, "snap_t0.2000.csv"))
            code, _, _, od2 = self.sim(d, {"g": 1, "T": 0.2, "snapshot_every": 0.1, "track_Q": True})
            self.assertEqual(read(os.path.join(od2, "snap_t0.2000.csv")), first)

    def test_config_errors(self):
        with tempfile.TemporaryDirectory() as d:
            self.assertEqual(self.sim(d, {"N": 1000})[0], 2)
            self.assertEqual(self.sim(d, {"bogus": 1})[0], 2)
            self.assertEqual(run("simulate", "--config", os.path.join(d, "missing.json"))[0], 2)
            with open(os.path.join(d, "broken.json"), "w") as f:
                f.write("{")
            self.assertEqual(run("simulate", "--config", os.path.join(d, "broken.json"))[0], 2)

    def test_blowup_exits_3(self):
        with tempfile.TemporaryDirectory() as d:
            code, _, err, od = self.sim(d, {"g": 1, "a": 2, "T": 2, "dt": 0.05, "snapshot_every": 0.05})
            self.assertEqual(code, 3)
            self.assertIn("last stable time", err)
            self.assertTrue(os.path.exists(os.path.join(od, "diagnostics.csv")))


if __name__ == "__main__":
    CLI = sys.argv.pop(1)
    unittest.main()
