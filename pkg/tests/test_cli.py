import io

import pytest

from conftest import GOLDEN_SEED, GOLDEN_TRACE
from scooprr.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def golden_file(tmp_path):
    path = tmp_path / "golden.trace"
    path.write_text(GOLDEN_TRACE)
    return path


def test_record_golden_seed(tmp_path):
    path = tmp_path / "t.trace"
    code, out = run("record", "--scenario", "market", "--seed", str(GOLDEN_SEED), "--out", str(path))
    assert code == 2
    assert path.read_text() == GOLDEN_TRACE
    assert "root.1: [2, 2] . [6, 6]" in out


def test_record_producer_consumer():
    assert run("record", "--scenario", "producer-consumer", "--seed", "7")[0] == 0


def test_unknown_scenario(capsys):
    assert run("record", "--scenario", "nosuch", "--seed", "1")[0] == 1
    assert "unknown scenario" in capsys.readouterr().err


def test_bad_parameter(capsys):
    assert run("run", "--scenario", "market", "--seed", "1", "-p", "colour=3")[0] == 1
    assert "bad scenario parameter" in capsys.readouterr().err


def test_unwritable_out(tmp_path):
    target = tmp_path / "missing" / "dir" / "t.trace"
    assert run("record", "--scenario", "market", "--seed", "1", "--out", str(target))[0] == 1


def test_replay_golden(golden_file):
    code, out = run("replay", "--scenario", "market", "--trace", str(golden_file))
    assert code == 2
    assert "cycle: root.1 -> root.4 -> root.2 -> root.3 -> root.1" in out


def test_replay_machine_report(golden_file):
    code, out = run("replay", "--scenario", "market", "--trace", str(golden_file),
                    "--report", "machine", "--interleave-seed", "99")
    assert code == 2
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["status"] == "deadlocked"
    assert lines["cycle"] == "root.1,root.4,root.2,root.3"
    assert lines["total"] == "9"


def test_replay_producer_consumer_is_identical(tmp_path):
    trace = tmp_path / "pc.trace"
    again = tmp_path / "pc2.trace"
    code, first = run("record", "--scenario", "producer-consumer", "-p", "n_items=4",
                      "--seed", "3", "--out", str(trace), "--report", "machine")
    assert code == 0
    code, second = run("replay", "--scenario", "producer-consumer", "-p", "n_items=4",
                       "--trace", str(trace), "--out", str(again), "--report", "machine")
    assert code == 0
    assert again.read_bytes() == trace.read_bytes()
    digest = [line for line in first.splitlines() if line.startswith("schedule_hash")]
    assert digest[0] in second


def test_replay_against_wrong_program(golden_file, capsys):
    code, _ = run("replay", "--scenario", "producer-consumer", "--trace", str(golden_file))
    assert code == 3
    assert "divergence" in capsys.readouterr().err


def test_replay_malformed_trace(tmp_path, capsys):
    path = tmp_path / "bad.trace"
    path.write_text(GOLDEN_TRACE.replace("proc root.2 4-4 8-8", "proc root.2 4-4 5-5"))
    assert run("replay", "--scenario", "market", "--trace", str(path))[0] == 1
    err = capsys.readouterr().err
    assert "line 5" in err


def test_verify_market():
    code, out = run("verify", "--scenario", "market", "--seed", str(GOLDEN_SEED))
    assert code == 0 and out.startswith("verified: deadlocked")


@pytest.mark.parametrize("seed", range(20))
def test_verify_producer_consumer(seed):
    assert run("verify", "--scenario", "producer-consumer", "-p", "n_items=5",
               "--seed", str(seed))[0] == 0


def test_verify_corrupted_magic(tmp_path):
    path = tmp_path / "c.trace"
    path.write_bytes(GOLDEN_TRACE.encode().replace(b"SCOOP", b"SCOPE"))
    assert run("verify", "--scenario", "market", "--trace", str(path))[0] == 1


def test_verify_foreign_but_wellformed_trace(tmp_path):
    # swap the investors' roles: parses fine, but this program cannot follow it
    path = tmp_path / "c.trace"
    path.write_text(GOLDEN_TRACE.replace("root.1 2-2", "root.1 4-4").replace("root.2 4-4", "root.2 2-2"))
    code, out = run("verify", "--scenario", "market", "--trace", str(path))
    assert code in (0, 4)
    path.write_text("SCOOP-RR 1\ntotal 1\nproc root.1 1-1\n")
    code, out = run("verify", "--scenario", "market", "--trace", str(path))
    assert code == 4 and out.startswith("mismatch")


def test_fuzz_market_lists_a_deadlock_witness(tmp_path):
    code, out = run("fuzz", "--scenario", "market", "--seeds", "0:500", "--out", str(tmp_path))
    assert code == 0
    assert any(line.startswith("schedule ") and " deadlocked seed " in line
               for line in out.splitlines())
    names = [p.name for p in tmp_path.iterdir()]
    assert any(n.startswith("deadlocked-") for n in names)
    assert any(n.startswith("terminated-") for n in names)


def test_fuzz_fig1_finds_two_classes():
    code, out = run("fuzz", "--scenario", "fig1", "--seeds", "0:100")
    assert code == 0
    assert "distinct_schedules 2" in out.splitlines()


def test_fuzz_empty_range():
    code, out = run("fuzz", "--scenario", "market", "--seeds", "5:5")
    assert code == 0 and "seeds_run 0" in out


def test_fuzz_fault_exit(capsys):
    assert run("fuzz", "--scenario", "market", "--seeds", "0:3", "--budget", "4")[0] == 1
    assert "seed 0" in capsys.readouterr().err
