from __future__ import annotations

from collections import defaultdict

import pytest

_RESULTS: dict[str, list[tuple[str, bool, str]]] = defaultdict(list)


class Recorder:
    def __call__(self, criterion: str, label: str, ok: bool, detail: str = "") -> None:
        ok = bool(ok)
        _RESULTS[criterion].append((label, ok, detail))
        line = f"{'PASS' if ok else 'FAIL'} [{criterion}] {label}"
        print(line + (f" ({detail})" if detail else ""))
        assert ok, f"{criterion} / {label}: {detail}"


@pytest.fixture
def record() -> Recorder:
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_RESULTS, key=lambda c: int(c.split()[-1])):
        checks = _RESULTS[crit]
        failed = [label for label, ok, _ in checks if not ok]
        status = "FAIL" if failed else "PASS"
        tail = f"; failing: {', '.join(failed)}" if failed else ""
        terminalreporter.write_line(f"{status}  {crit}: {len(checks) - len(failed)}/{len(checks)} checks{tail}")
