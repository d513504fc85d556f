import json
from dataclasses import dataclass, field
from pathlib import Path

from bandflow.constants import CheckStatus, ExitCode
from bandflow.errors import ConfigurationError
from bandflow.utils import jsonable

from .checks import CheckResult


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == CheckStatus.FAIL]

    @property
    def exit_code(self) -> ExitCode:
        """VERIFICATION_FAILED iff some check failed."""
        return ExitCode.VERIFICATION_FAILED if self.failed else ExitCode.OK

    def __getitem__(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"meta": self.meta, "checks": [c.to_dict() for c in self.checks]}

    def to_json(self) -> str:
        """
        Deterministic JSON: sorted keys and checks ordered by name.
        """
        return json.dumps(jsonable(self.to_dict()), sort_keys=True, indent=2) + "\n"

    def write(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_json())
        return path


def build_report(checks: list[CheckResult], meta: dict | None = None) -> VerificationReport:
    """
    Gather check results into a report ordered by check name.

    Parameters
    ----------
    checks : list[CheckResult]
        The results.
    meta : dict, optional
        Run metadata (pair, grid, scheme, horizon notices), by default None

    Returns
    -------
    VerificationReport
        The report.

    Raises
    ------
    ConfigurationError
        If two results carry the same name.
    """
    names = [c.name for c in checks]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigurationError(f"duplicate check names: {', '.join(duplicates)}")
    return VerificationReport(sorted(checks, key=lambda c: c.name), dict(meta or {}))
