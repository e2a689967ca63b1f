import decimal

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def dec():
    """Independent decimal-module oracle at 80 digits (no mpmath involved)."""
    ctx = decimal.Context(prec=80)
    s5 = ctx.sqrt(decimal.Decimal(5))
    alpha = ctx.divide(ctx.add(1, s5), 2)
    return {
        "ctx": ctx,
        "sqrt5": s5,
        "alpha": alpha,
        "ln2": ctx.ln(decimal.Decimal(2)),
        "ln3": ctx.ln(decimal.Decimal(3)),
        "ln5": ctx.ln(decimal.Decimal(5)),
        "lnalpha": ctx.ln(alpha),
    }


@pytest.fixture
def record_criterion():
    def record(name, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
