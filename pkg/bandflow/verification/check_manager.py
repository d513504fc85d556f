import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

from bandflow.constants import CheckStatus
from bandflow.errors import DependencyError, InsufficientDataError

from .checks import CheckResult
from .report import VerificationReport, build_report

logger = logging.getLogger(__name__)


class CheckManager:
    def __init__(
        self,
        checks: dict[str, Callable[[], CheckResult]],
        max_workers: int | None = None,
        meta: dict | None = None,
    ):
        """
        Create a check manager. Every check is a callable without arguments
        returning a CheckResult; the name it is registered under is the name
        it carries in the report.

        Parameters
        ----------
        checks : dict[str, Callable[[], CheckResult]]
            The checks by name.
        max_workers : int, optional
            Size of the thread pool; checks run one after the other when None,
            by default None
        meta : dict, optional
            Run metadata passed on to the report, by default None
        """
        self.checks = checks
        self.max_workers = max_workers
        self.meta = dict(meta or {})

    def run_one(self, name: str) -> CheckResult:
        """
        Run the named check. Missing inputs and short traces become
        not-applicable and partial results instead of errors.

        Parameters
        ----------
        name : str
            The check name.

        Returns
        -------
        CheckResult
            The result, renamed to `name`.
        """
        try:
            result = self.checks[name]()
        except DependencyError as err:
            result = CheckResult(name, CheckStatus.NOT_APPLICABLE, note=str(err))
        except InsufficientDataError as err:
            result = CheckResult(name, CheckStatus.PARTIAL, note=str(err))
        result.name = name
        logger.info("check %s: %s %s", name, result.status.value, result.note)
        return result

    def run(self) -> list[CheckResult]:
        """
        Run all the checks.

        Returns
        -------
        list[CheckResult]
            Results in registration order.
        """
        names = list(self.checks)
        if self.max_workers is None or self.max_workers <= 1:
            return [self.run_one(name) for name in names]
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            return list(pool.map(self.run_one, names))

    def report(self) -> VerificationReport:
        return build_report(self.run(), self.meta)
