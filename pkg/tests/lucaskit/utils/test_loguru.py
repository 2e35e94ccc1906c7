import pytest

from loguru import logger

from lucaskit.qfactor import factorize
from lucaskit.utils.logging.loguru import set_up_logger, verbosity_to_level


@pytest.mark.parametrize(
    "verbosity, base_level, expected",
    [
        (0, "WARNING", "WARNING"),
        (1, "WARNING", "INFO"),
        (2, "WARNING", "DEBUG"),
        (9, "WARNING", "TRACE"),
        (0, "info", "INFO"),
    ],
)
def test_verbosity_to_level(verbosity, base_level, expected):
    assert verbosity_to_level(verbosity, base_level) == expected


def test_set_up_logger_writes_trace_to_file(tmp_path, capsys):
    log_file = tmp_path / "logs" / "lucaskit.log"
    set_up_logger("WARNING", log_file=str(log_file))
    logger.trace("only in the file")
    logger.warning("everywhere")
    logger.remove()

    content = log_file.read_text()
    assert "only in the file" in content
    assert "everywhere" in content
    captured = capsys.readouterr()
    assert "everywhere" in captured.err
    assert "only in the file" not in captured.err
    assert captured.out == ""


def test_default_filter_keeps_per_call_traces_out_of_the_console(tmp_path, capsys):
    log_file = tmp_path / "lucaskit.log"
    set_up_logger("TRACE", log_file=log_file)
    factorize(7, 2)
    logger.trace("from elsewhere")
    logger.remove()

    captured = capsys.readouterr()
    assert "from elsewhere" in captured.err
    assert "Factorized 7!" not in captured.err
    assert "Factorized 7!" in log_file.read_text()
