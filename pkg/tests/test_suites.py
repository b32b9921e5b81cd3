from boundary_wres.suites import IDENTITY_SUITES, CheckResult, _run, run_identity_suites


def test_all_identity_suites_pass():
    results = run_identity_suites()
    assert [s.name for s in results] == sorted(IDENTITY_SUITES)
    for s in results:
        assert s.passed, s.failures()


def test_exceptions_become_failures():
    def boom():
        raise ArithmeticError("bad")

    res = _run("x", [("ok", lambda: (True, "1")), ("boom", boom)])
    assert res.failures() == ["boom"]
    assert "ArithmeticError" in res.results[1].exact


def test_result_dict_shape():
    d = CheckResult("n", False, "e", 1.5, 0.1).as_dict()
    assert d == {"name": "n", "status": "fail", "exact": "e", "float": 1.5, "rel_err": 0.1}
