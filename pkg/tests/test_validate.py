"""The built-in property-check suite must pass end to end."""

from irswet.validate import run_checks


def test_quick_checks_all_pass():
    results = run_checks(quick=True)
    failed = [r for r in results if not r.passed]
    assert not failed, "\n".join(f"{r.name}: {r.detail}" for r in failed)
    assert len(results) >= 15
    # names are unique so the report is unambiguous
    names = [r.name for r in results]
    assert len(names) == len(set(names))
