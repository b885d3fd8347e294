from pytest import mark

from crlab.exceptions import (
    ConfigError,
    CrlabException,
    EvaluationError,
    ExpressionSyntaxError,
    NormalizationError,
    PreconditionError,
    RayError,
    UnsupportedError,
    exception,
    get_exception_cls,
)


@mark.parametrize(
    "code, cls",
    [
        (None, CrlabException),
        ("unknown", CrlabException),
        ("syntax", ExpressionSyntaxError),
        ("log_domain", EvaluationError),
        ("ray_no_root", RayError),
        ("not_strict", NormalizationError),
        ("leray_missing", PreconditionError),
        ("unsupported_dimension", UnsupportedError),
        ("config_value", ConfigError),
        ("something_else", CrlabException),
    ],
)
def test_get_exception_cls(code, cls):
    assert get_exception_cls(code) is cls


def test_exception():
    e = exception("config_unknown_key", "Unknown key. ", details={"path": "resolution.quad"})

    assert isinstance(e, ConfigError)
    assert e.code == "config_unknown_key"
    assert e.path == "resolution.quad"
    assert str(e) == "Unknown key"


def test_unknown_exception():
    e = exception()
    assert type(e) is CrlabException
    assert e.code == "unknown"
    assert str(e) == "Unknown error"
