from __future__ import annotations

import pytest
import structlog

from symlab._logging import configure_logging

pytestmark = pytest.mark.usefixtures("reset_logging")


def test_quiet_by_default(capsys: pytest.CaptureFixture[str]) -> None:
    configure_logging()
    logger = structlog.get_logger("symlab.test")
    logger.info("contraction", iterations=3)
    logger.warning("hypotheses_inconclusive", coercivity="inconclusive")
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "contraction" not in captured.err
    assert "hypotheses_inconclusive" in captured.err
    assert "coercivity=inconclusive" in captured.err


def test_verbose(capsys: pytest.CaptureFixture[str]) -> None:
    configure_logging(verbose=True)
    structlog.get_logger("symlab.test").debug("start_failed", index=4)
    captured = capsys.readouterr()
    assert "start_failed" in captured.err
    assert "index=4" in captured.err
    assert "debug" in captured.err
