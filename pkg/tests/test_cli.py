import numpy as np
import pytest

from hsig.cli import EXIT_FORGED, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, main
from hsig.model import RawSignature, load_profile, serialize_signature

from conftest import wavy_signature


def _write_refs(directory, rng, count=5, noise=0.01, outlier=True):
    directory.mkdir(parents=True, exist_ok=True)
    sigs = [wavy_signature(rng, n=80, noise=noise, pressure_noise=noise)
            for _ in range(count - 1)]
    if outlier:
        sigs.append(wavy_signature(rng, n=80, noise=0.12, pressure_noise=0.08))
    else:
        sigs.append(wavy_signature(rng, n=80, noise=noise, pressure_noise=noise))
    for i, sig in enumerate(sigs):
        (directory / f"ref{i:02d}.csv").write_text(serialize_signature(sig, "csv"))
    return sigs


class TestEnroll:
    def test_success(self, tmp_path, rng, capsys):
        refs = tmp_path / "refs"
        _write_refs(refs, rng)
        out = tmp_path / "user.prof"
        code = main(["enroll", "--refs", str(refs), "--out", str(out),
                     "--user", "alice", "--delta", "2.0"])
        assert code == EXIT_OK
        assert out.exists()
        profile = load_profile(out.read_bytes())
        assert profile.user_id == "alice"
        assert profile.delta == 2.0
        captured = capsys.readouterr()
        assert "signal traj section band weight dmax" in captured.out

    def test_missing_directory(self, tmp_path):
        code = main(["enroll", "--refs", str(tmp_path / "nope"),
                     "--out", str(tmp_path / "p")])
        assert code == EXIT_USAGE

    def test_too_few_signatures(self, tmp_path, rng):
        refs = tmp_path / "refs"
        refs.mkdir()
        sig = wavy_signature(rng)
        (refs / "only.csv").write_text(serialize_signature(sig, "csv"))
        code = main(["enroll", "--refs", str(refs),
                     "--out", str(tmp_path / "p")])
        assert code == EXIT_USAGE

    def test_malformed_signature_file(self, tmp_path):
        refs = tmp_path / "refs"
        refs.mkdir()
        (refs / "a.csv").write_text("not,a,signature\n")
        (refs / "b.csv").write_text("t,x,y,p\n")
        code = main(["enroll", "--refs", str(refs),
                     "--out", str(tmp_path / "p")])
        assert code == EXIT_USAGE

    def test_degenerate_references_internal_error(self, tmp_path):
        refs = tmp_path / "refs"
        refs.mkdir()
        n = 16
        sig = RawSignature(t=np.arange(n, dtype=float),
                           x=np.zeros(n), y=np.zeros(n),
                           p=np.full(n, 0.5))
        for i in range(2):
            (refs / f"r{i}.csv").write_text(serialize_signature(sig, "csv"))
        code = main(["enroll", "--refs", str(refs),
                     "--out", str(tmp_path / "p")])
        assert code == EXIT_INTERNAL


class TestVerify:
    @pytest.fixture
    def enrolled(self, tmp_path, rng):
        refs = tmp_path / "refs"
        sigs = _write_refs(refs, rng)
        out = tmp_path / "user.prof"
        assert main(["enroll", "--refs", str(refs), "--out", str(out),
                     "--delta", "2.0"]) == EXIT_OK
        return out, sigs

    def test_genuine(self, tmp_path, enrolled, capsys):
        profile_path, sigs = enrolled
        probe = tmp_path / "probe.csv"
        probe.write_text(serialize_signature(sigs[0], "csv"))
        code = main(["verify", "--profile", str(profile_path),
                     "--sig", str(probe)])
        assert code == EXIT_OK
        assert "decision: genuine" in capsys.readouterr().out

    def test_forged(self, tmp_path, enrolled, capsys):
        profile_path, sigs = enrolled
        ref = sigs[0]
        forged = RawSignature(t=ref.t, x=ref.x[::-1].copy(),
                              y=-ref.y[::-1].copy(), p=ref.p)
        probe = tmp_path / "probe.csv"
        probe.write_text(serialize_signature(forged, "csv"))
        code = main(["verify", "--profile", str(profile_path),
                     "--sig", str(probe)])
        assert code == EXIT_FORGED
        assert "decision: forged" in capsys.readouterr().out

    def test_shape_only_mode(self, tmp_path, enrolled):
        profile_path, sigs = enrolled
        flat = RawSignature(t=sigs[0].t, x=sigs[0].x, y=sigs[0].y,
                            p=np.full(len(sigs[0].x), 0.5))
        probe = tmp_path / "probe.csv"
        probe.write_text(serialize_signature(flat, "csv"))
        code = main(["verify", "--profile", str(profile_path),
                     "--sig", str(probe), "--mode", "shape-only"])
        assert code in (EXIT_OK, EXIT_FORGED)

    def test_corrupt_profile(self, tmp_path, enrolled):
        profile_path, sigs = enrolled
        data = bytearray(profile_path.read_bytes())
        data[-1] ^= 0xFF
        bad = tmp_path / "bad.prof"
        bad.write_bytes(bytes(data))
        probe = tmp_path / "probe.csv"
        probe.write_text(serialize_signature(sigs[0], "csv"))
        code = main(["verify", "--profile", str(bad), "--sig", str(probe)])
        assert code == EXIT_USAGE

    def test_missing_signature_file(self, tmp_path, enrolled):
        profile_path, _ = enrolled
        code = main(["verify", "--profile", str(profile_path),
                     "--sig", str(tmp_path / "absent.csv")])
        assert code == EXIT_USAGE

    def test_unknown_extension(self, tmp_path, enrolled):
        profile_path, sigs = enrolled
        probe = tmp_path / "probe.xyz"
        probe.write_text(serialize_signature(sigs[0], "csv"))
        code = main(["verify", "--profile", str(profile_path),
                     "--sig", str(probe)])
        assert code == EXIT_USAGE


class TestSynthAndBench:
    def test_synth_layout(self, tmp_path):
        out = tmp_path / "data"
        code = main(["synth", "--users", "2", "--seed", "0", "--out", str(out)])
        assert code == EXIT_OK
        users = sorted(p.name for p in out.iterdir())
        assert users == ["user000", "user001"]
        for user in users:
            assert len(list((out / user / "genuine").glob("*.csv"))) == 15
            assert len(list((out / user / "forgery").glob("*.csv"))) == 10

    def test_synth_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["synth", "--users", "1", "--seed", "7", "--out", str(a)]) == EXIT_OK
        assert main(["synth", "--users", "1", "--seed", "7", "--out", str(b)]) == EXIT_OK
        fa = a / "user000" / "genuine" / "genuine000.csv"
        fb = b / "user000" / "genuine" / "genuine000.csv"
        assert fa.read_text() == fb.read_text()

    def test_synth_zero_users(self, tmp_path):
        code = main(["synth", "--users", "0", "--out", str(tmp_path / "d")])
        assert code == EXIT_USAGE

    def test_bench_end_to_end(self, tmp_path, capsys):
        data = tmp_path / "data"
        assert main(["synth", "--users", "2", "--out", str(data)]) == EXIT_OK
        out = tmp_path / "report"
        code = main(["bench", "--data", str(data), "--out", str(out),
                     "--reps", "1", "--P-list", "2", "--delta", "2.0",
                     "--cth-sweep"])
        assert code == EXIT_OK
        assert (out / "report.txt").exists()
        assert (out / "report.kv").read_text().startswith("P=2 R=2 far=")
        assert (out / "weights.tsv").read_text().splitlines()[0] == "s a p r weight"
        stdout = capsys.readouterr().out
        assert "Average FAR" in stdout
        assert "EER=" in stdout

    def test_bench_missing_dataset(self, tmp_path):
        code = main(["bench", "--data", str(tmp_path / "none")])
        assert code == EXIT_USAGE

    def test_bench_bad_layout(self, tmp_path):
        data = tmp_path / "data"
        (data / "user000").mkdir(parents=True)
        code = main(["bench", "--data", str(data)])
        assert code == EXIT_USAGE


class TestInspect:
    def test_round_trip(self, tmp_path, rng, capsys):
        refs = tmp_path / "refs"
        _write_refs(refs, rng)
        out = tmp_path / "user.prof"
        assert main(["enroll", "--refs", str(refs), "--out", str(out),
                     "--user", "bob"]) == EXIT_OK
        capsys.readouterr()
        assert main(["inspect", "--profile", str(out)]) == EXIT_OK
        stdout = capsys.readouterr().out
        assert "user_id: bob" in stdout
        assert "P: 2" in stdout

    def test_missing_profile(self, tmp_path):
        assert main(["inspect", "--profile", str(tmp_path / "no.prof")]) == EXIT_USAGE
