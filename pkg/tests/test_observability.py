"""Tests for the logging helpers."""

from khovanov.observability import logfire_config


def test_events_go_to_structlog_only_without_token(mocker):
    logger = mocker.patch.object(logfire_config, "logger")
    forward = mocker.patch.object(logfire_config, "logfire")
    mocker.patch.object(logfire_config, "_initialized", False)
    logfire_config.log_event("compute_finished", diagrams=1)
    logfire_config.log_warning("crossing_limit_exceeded", crossings=14, limit=12)
    logger.info.assert_called_once_with("compute_finished", diagrams=1)
    logger.warning.assert_called_once_with("crossing_limit_exceeded", crossings=14, limit=12)
    forward.info.assert_not_called()
    forward.warn.assert_not_called()


def test_events_forward_to_logfire_when_initialized(mocker):
    mocker.patch.object(logfire_config, "logger")
    forward = mocker.patch.object(logfire_config, "logfire")
    mocker.patch.object(logfire_config, "_initialized", True)
    logfire_config.log_error("verify_failed", diagrams=["3_1"])
    forward.error.assert_called_once_with("verify_failed", diagrams=["3_1"])


def test_timed_logs_elapsed_and_extras(mocker):
    logger = mocker.patch.object(logfire_config, "logger")
    mocker.patch.object(logfire_config, "_initialized", False)
    with logfire_config.timed("table_computed", variant="even") as extra:
        extra["entries"] = 5
    args, kwargs = logger.debug.call_args
    assert args == ("table_computed",)
    assert kwargs["variant"] == "even"
    assert kwargs["entries"] == 5
    assert kwargs["elapsed_ms"] >= 0


def test_timed_opens_span_when_initialized(mocker):
    mocker.patch.object(logfire_config, "logger")
    forward = mocker.patch.object(logfire_config, "logfire")
    mocker.patch.object(logfire_config, "_initialized", True)
    with logfire_config.timed("check_timed", check="euler"):
        pass
    forward.span.assert_called_once_with("check_timed", check="euler")


def test_initialize_without_token_is_a_no_op(mocker):
    settings = mocker.Mock(logfire_token=None)
    mocker.patch.object(logfire_config, "get_settings", return_value=settings)
    forward = mocker.patch.object(logfire_config, "logfire")
    mocker.patch.object(logfire_config, "_initialized", False)
    logfire_config.initialize_logfire()
    forward.configure.assert_not_called()
    assert logfire_config._initialized is False
