import io
import json

import numpy as np
import pytest

from ssalab import BlockAllocation, DensityMatrix, named_state, random_density, theorem2_family
from ssalab import io as sio
from ssalab import verify as V
from ssalab.cli import main
from ssalab.errors import PreconditionError
from ssalab.states import random_mixture


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


class TestStateFormat:
    @pytest.mark.parametrize("seed", range(5))
    def test_roundtrip_byte_identical(self, seed):
        rho = random_density((2, 3), None, seed)
        text = sio.dumps_state(rho)
        back = sio.loads_state(text)
        assert back == rho
        assert sio.dumps_state(back) == text

    def test_negative_zero(self):
        rho = DensityMatrix((2,), np.array([[0.5, -0.0], [-0.0, 0.5]], dtype=complex))
        text = sio.dumps_state(rho)
        assert "-0," not in text
        assert sio.dumps_state(sio.loads_state(text)) == text

    def test_mixture_roundtrip(self):
        _, mix = theorem2_family((4, 4, 2), BlockAllocation.uniform((2, 2)), (0.3, 0.7), 2)
        text = sio.dumps_mixture(mix)
        back = sio.loads_mixture(text)
        assert back.weights == mix.weights
        assert sio.dumps_mixture(back) == text

    @pytest.mark.parametrize(
        "text, msg",
        [
            ("{", "line 1 column 2"),
            ('{"dims": [2]}', "missing field 'matrix'"),
            ('{"dims": [2], "matrix": [[1, 0]]}', "expected 4 entries"),
            ('{"dims": [1], "matrix": [[1]]}', r"matrix\[0\]"),
            ('{"dims": [0], "matrix": []}', "positive integers"),
        ],
    )
    def test_parse_errors(self, text, msg):
        with pytest.raises(sio.FormatError, match=msg):
            sio.loads_state(text)


class TestReports:
    def records(self):
        reports = V.verify_theorem2((4, 4, 2), BlockAllocation.uniform((2, 2)), (0.5, 0.5), 3, seed=3)
        reports.append(V.verify_lemma1(named_state("ghz")))
        return [sio.report_record(r, "2026-01-01T00:00:00+00:00") for r in reports]

    @pytest.mark.parametrize("fmt", ["json", "csv"])
    def test_roundtrip_byte_identical(self, fmt):
        text = sio.dumps_reports(self.records(), fmt)
        back = sio.loads_reports(text, fmt)
        assert sio.dumps_reports(back, fmt) == text

    def test_csv_layout(self):
        text = sio.dumps_reports_csv(self.records())
        assert text.startswith(",".join(sio.REPORT_FIELDS) + "\r\n")
        assert ",true," in text

    def test_csv_bad_header(self):
        with pytest.raises(sio.FormatError, match="header"):
            sio.loads_reports_csv("a,b\r\n")

    def test_unknown_format(self):
        with pytest.raises(PreconditionError):
            sio.dumps_reports([], "xml")


class TestCLI:
    def test_gen_then_eval(self, tmp_path):
        state = str(tmp_path / "ghz.json")
        code, out = run(["gen", "--family", "ghz", "-o", state])
        assert code == 0 and "correlation information = 3.0 bits" in out
        assert run(["eval", state, "corr"]) == (0, "3.0 bits\n")
        assert run(["eval", state, "mutual", "1", "2,3"]) == (0, "2.0 bits\n")
        assert run(["eval", state, "among", "{1}|{2,3}"]) == (0, "2.0 bits\n")
        code, out = run(["eval", state, "entropy", "1", "--log-base", "nats"])
        assert float(out.split()[0]) == pytest.approx(np.log(2), abs=1e-12)

    def test_eval_arity(self, tmp_path, capsys):
        state = str(tmp_path / "bell.json")
        run(["gen", "--family", "bell", "-o", state])
        assert run(["eval", state, "mutual", "1"])[0] == 2
        assert "mutual takes 2" in capsys.readouterr().err

    def test_verify_pass(self, tmp_path):
        rep = tmp_path / "t2.json"
        code, out = run(["verify", "theorem2", "--dims", "4,4,2", "--samples", "3", "--report-file", str(rep)])
        assert code == 0 and "15/15 passed" in out
        recs = sio.loads_reports_json(rep.read_text())
        assert [r["seed"] for r in recs[::5]] == [0, 1, 2]

    def test_verify_fail_exit_1(self, tmp_path):
        # an equality check on generic states must fail
        code, out = run(
            ["verify", "ssa", "--equality", "--dims", "2,2,2", "--report-file", str(tmp_path / "s.csv"), "--out", "csv"]
        )
        assert code == 1 and "equality detected in 0 of 6" in out

    def test_premise_exit_2(self, tmp_path, capsys):
        mix = tmp_path / "mix.json"
        sio.save_mixture(mix, random_mixture((2, 2), 2, 0))
        code, _ = run(["verify", "lemma3", "--mixture", str(mix), "--report-file", str(tmp_path / "r.json")])
        assert code == 2
        assert "premise error" in capsys.readouterr().err
        assert not (tmp_path / "r.json").exists()

    def test_missing_file_exit_2(self, tmp_path):
        assert run(["eval", str(tmp_path / "nope.json"), "corr"])[0] == 2

    def test_mixture_output(self, tmp_path):
        state, mix = tmp_path / "s.json", tmp_path / "m.json"
        code, _ = run(["gen", "--family", "biorthogonal", "--dims", "4,4", "-o", str(state), "--mixture-output", str(mix)])
        assert code == 0
        code, _ = run(["verify", "lemma3", "--mixture", str(mix), "--report-file", str(tmp_path / "r.json")])
        assert code == 0

    @pytest.mark.parametrize("fmt", ["json", "csv"])
    def test_deterministic_reruns(self, tmp_path, fmt):
        outs = []
        for k in range(2):
            path = tmp_path / f"r{k}.{fmt}"
            run(["verify", "theorem1", "--dims", "2,2,2", "--samples", "4", "--timestamp", "T", "--out", fmt,
                 "--report-file", str(path)])
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_jobs_do_not_change_output(self, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for path, jobs in zip(paths, ("1", "4")):
            run(["verify", "ssa", "--dims", "2,2,2", "--samples", "6", "--timestamp", "T", "--jobs", jobs,
                 "--report-file", str(path)])
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_source_date_epoch(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
        path = tmp_path / "r.json"
        run(["verify", "lemma1", "--dims", "2,2", "--report-file", str(path)])
        assert json.loads(path.read_text())[0]["timestamp"] == "1970-01-01T00:00:00+00:00"

    def test_gen_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for p in (a, b):
            run(["gen", "--family", "theorem2", "--dims", "4,4,2", "--seed", "5", "-o", str(p)])
        assert a.read_bytes() == b.read_bytes()
