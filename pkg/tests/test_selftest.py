import json
import os
import tempfile
import unittest
from unittest.mock import MagicMock, patch

from pdeforge import selftest
from pdeforge.config import Settings


class TestSelfTestRunner(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.state_file = os.path.join(self.tmp.name, "state", "selftest_state.json")
        self.settings = Settings(threads=2, state_file=self.state_file)

    def tearDown(self):
        self.tmp.cleanup()

    def read_state(self):
        with open(self.state_file) as f:
            return json.load(f)

    def test_quick_checks_pass_and_record_success(self):
        callback = MagicMock()
        runner = selftest.SelfTestRunner(self.settings, lang="en", progress_callback=callback)
        report = runner.run("quick", 0, only={1, 15})

        self.assertTrue(report.passed)
        self.assertEqual([r.number for r in report.results], [1, 15])
        callback.assert_called_once()
        state = self.read_state()
        self.assertEqual(state["last_status"], "success")
        self.assertEqual(state["checks"], {"1": True, "15": True})
        self.assertIn("last_success", state)

    def test_failure_keeps_last_success(self):
        runner = selftest.SelfTestRunner(self.settings, lang="en")
        runner.run("quick", 0, only={1})
        first = self.read_state()["last_success"]

        failing = [(99, "always fails", lambda full, seed: (False, "no"))]
        with patch("pdeforge.selftest.CHECKS", failing):
            report = runner.run("quick", 0)

        self.assertFalse(report.passed)
        state = self.read_state()
        self.assertEqual(state["last_status"], "failed")
        self.assertEqual(state["last_success"], first)

    def test_raising_check_counts_as_failure(self):
        def boom(full, seed):
            raise RuntimeError("broken")

        with patch("pdeforge.selftest.CHECKS", [(98, "raises", boom)]):
            report = selftest.SelfTestRunner(self.settings, lang="en").run("quick", 0)

        self.assertFalse(report.passed)
        self.assertIn("RuntimeError", report.results[0].detail)

    def test_unknown_suite(self):
        with self.assertRaises(ValueError):
            selftest.SelfTestRunner(self.settings).run("nightly")

    def test_report_json(self):
        report = selftest.run_selftest("quick", 0, settings=self.settings)
        doc = report.to_json()
        self.assertEqual(len(doc["checks"]), len(selftest.CHECKS))
        self.assertTrue(doc["passed"], [c for c in doc["checks"] if not c["passed"]])


if __name__ == '__main__':
    unittest.main()
