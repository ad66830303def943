"""Cross-process determinism and concurrent-use guarantees."""

import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor

from noetherjet.verifier import CATALOG_NAMES, catalog, verify_record


def _run_cli(hash_seed: str, *args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "noetherjet.cli", *args],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin:/usr/local/bin", "PYTHONHASHSEED": hash_seed},
        timeout=120,
    )


class TestCrossProcessDeterminism:
    def test_machine_report_stable_under_hash_randomization(self):
        args = ("verify", "--all", "--report", "machine")
        first = _run_cli("1", *args)
        second = _run_cli("2", *args)
        assert first.returncode == 0, first.stderr
        assert second.returncode == 0
        assert first.stdout == second.stdout
        assert len(first.stdout.strip().splitlines()) == 16

    def test_bracket_table_stable_under_hash_randomization(self):
        args = ("bracket-table", "--report", "machine")
        first = _run_cli("3", *args)
        second = _run_cli("4", *args)
        assert first.returncode == 0, first.stderr
        assert first.stdout == second.stdout


class TestConcurrentUse:
    def test_parallel_verification_matches_sequential(self):
        records = list(catalog())
        sequential = [verify_record(r) for r in records]
        with ThreadPoolExecutor(max_workers=8) as pool:
            parallel = list(pool.map(verify_record, records))
        for seq, par in zip(sequential, parallel):
            assert seq.symmetry_name == par.symmetry_name
            assert seq.defect == par.defect
            assert seq.constructed_flux == par.constructed_flux
            assert seq.constructed_residual == par.constructed_residual
            assert seq.paper_residual == par.paper_residual
            assert seq.equivalent == par.equivalent

    def test_results_merge_in_name_order(self):
        names = [r.name for r in catalog()]
        assert tuple(names) == CATALOG_NAMES
