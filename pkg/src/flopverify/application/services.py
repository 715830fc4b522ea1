import html
import logging
import os
import sqlite3
import time
from concurrent.futures import ProcessPoolExecutor

from pybars import Compiler

from flopverify.application.repository import IReportRepository
from flopverify.domain.bbw_engine import Bundle, HomogeneousSpace, euler_characteristic
from flopverify.domain.character_ring import CharacterError, RepSum
from flopverify.domain.flop_catalog import (
    AssertionResult,
    CaseDataError,
    FlopCase,
    lemma_suite,
    load_case,
    parse_case_name,
    run_assertion,
)
from flopverify.domain.mutation_replay import GramMatrix, run_script
from flopverify.domain.report import Report
from flopverify.domain.weight_lattice import Weight
from flopverify.settings import Settings

logger = logging.getLogger(__name__)

REPORT_TEMPLATE = "report.md"


def _verify_worker(args: tuple[str, int | None, bool, Settings]) -> Report:
    name, n, only_lemmas, settings = args
    return VerificationService(None, settings).verify_case(name, n, only_lemmas)


class VerificationService:
    """
    Runs lemma suites and replays for flop cases, renders reports and stores
    them in the report history.
    """

    def __init__(
        self,
        report_repo: IReportRepository | None,
        settings: Settings | None = None,
        templates_dir: str | None = None,
    ):
        """
        Args:
            report_repo: Repository for finished reports; None disables history
            settings: Run configuration, defaults if None
            templates_dir: Directory with report templates; overrides settings
        """
        self._report_repo = report_repo
        self._settings = settings or Settings()
        self._templates_dir = templates_dir

    def _load_template(self, template_name: str) -> Compiler | None:
        """
        Load a Handlebars template.

        Looks in the explicit templates directory first, then in the configured
        one, then in ``templates/`` next to the package sources.

        Returns:
            Compiled template or None if template not found
        """
        if self._templates_dir:
            template_path = os.path.join(self._templates_dir, template_name)
            if os.path.exists(template_path):
                with open(template_path, encoding="utf-8") as template_file:
                    return Compiler().compile(template_file.read())
            return None

        candidates = [
            os.path.join(self._settings.templates_dir, template_name),
            os.path.join(os.getcwd(), "templates", template_name),
            os.path.join(
                os.path.dirname(__file__), "..", "..", "..", "templates", template_name
            ),
        ]
        for template_path in candidates:
            if os.path.exists(template_path):
                with open(template_path, encoding="utf-8") as template_file:
                    return Compiler().compile(template_file.read())

        return None

    def load(self, name: str, n: int | None = None) -> FlopCase:
        """
        Load a case with the configured lemma window and parameter bound.

        Raises:
            ValueError: for unknown case names or out-of-range n
        """
        return load_case(
            name, n, lemma_window=self._settings.lemma_window, max_n=self._settings.max_n
        )

    def run_lemmas(self, case: FlopCase) -> list[AssertionResult]:
        results = []
        for assertion in lemma_suite(case):
            try:
                result = run_assertion(case, assertion)
            except (CharacterError, ValueError) as e:
                result = AssertionResult(
                    assertion.group, assertion.label, False, "EulerOnly", "error", str(e)
                )
            if not result.passed:
                logger.warning(f"{case.name}: {assertion.label} failed ({result.computed})")
            results.append(result)
        return results

    def euler_oracle(self, space: HomogeneousSpace, bundle: Bundle) -> RepSum[Weight]:
        """
        Euler characteristic of a bundle by Weyl summation, within the
        configured rank cap.

        Raises:
            ValueError: if the root system rank exceeds ``weyl_rank_cap``
        """
        return euler_characteristic(space, bundle, self._settings.weyl_rank_cap)

    def verify_case(self, name: str, n: int | None = None, only_lemmas: bool = False) -> Report:
        """
        Verify one case: consistency checks, lemma suite and (unless
        ``only_lemmas``) the full mutation replay.

        Raises:
            ValueError: for unknown case names or out-of-range n
        """
        started = time.perf_counter()
        case_name = name if n is None else f"{parse_case_name(name, n)[0]}({n})"
        report = Report(id=None, case=case_name, only_lemmas=only_lemmas)
        try:
            case = self.load(name, n)
        except CaseDataError as e:
            report.error = str(e)
            return report
        report.case = case.name
        report.structure = list(case.structure)
        report.timings["load"] = time.perf_counter() - started

        logger.info(f"{case.name}: running {len(case.lemmas)} lemma assertions")
        lemma_start = time.perf_counter()
        report.assertions = self.run_lemmas(case)
        report.timings["lemmas"] = time.perf_counter() - lemma_start

        if not only_lemmas:
            logger.info(f"{case.name}: replaying {len(case.script)} script sentences")
            replay_start = time.perf_counter()
            report.replay = run_script(case)
            report.timings["replay"] = time.perf_counter() - replay_start
            if report.replay.error:
                logger.error(f"{case.name}: {report.replay.error}")
            for mismatch in report.replay.mismatches:
                logger.error(f"{case.name}: {mismatch}")

        report.timings["total"] = time.perf_counter() - started
        logger.info(f"{case.name}: {report.verdict.value}")
        return report

    def verify_all(
        self, cases: list[tuple[str, int | None]], only_lemmas: bool = False
    ) -> list[Report]:
        """
        Verify several cases in worker processes; results are sorted by case name.
        """
        jobs = [(name, n, only_lemmas, self._settings) for name, n in cases]
        if self._settings.workers == 1 or len(jobs) == 1:
            reports = [_verify_worker(job) for job in jobs]
        else:
            with ProcessPoolExecutor(max_workers=self._settings.workers) as executor:
                reports = list(executor.map(_verify_worker, jobs))
        return sorted(reports, key=lambda report: report.case)

    def save_report(self, report: Report) -> None:
        """
        Raises:
            Exception: If there's an error saving to the repository
        """
        if self._report_repo is None:
            return
        try:
            self._report_repo.save(report)
        except sqlite3.Error as e:
            raise Exception(f"Database error saving report: {str(e)}") from e

    def history(self) -> list[dict]:
        if self._report_repo is None:
            return []
        return self._report_repo.get_all()

    def render_markdown(self, report: Report, include_timings: bool = False) -> str:
        """
        Render a report with the Handlebars report template.

        Raises:
            ValueError: if the template is missing
        """
        template = self._load_template(REPORT_TEMPLATE)
        if not template:
            raise ValueError(f"Template {REPORT_TEMPLATE} not found.")

        data = report.to_dict(include_timings=include_timings)
        context = {
            **data,
            "passed": data["verdict"] == "PASS",
            "failed_assertions": [a for a in data["assertions"] if not a["passed"]],
            "timings": [
                {"stage": stage, "seconds": f"{seconds:.3f}"}
                for stage, seconds in report.timings.items()
            ]
            if include_timings
            else [],
        }
        if report.replay is not None:
            replay = report.replay
            context["replay_steps"] = [
                {**c.to_dict(), "notes_text": "; ".join(c.notes)} for c in replay.certificates
            ]
            context["final_gram_table"] = _gram_table(replay.final_gram)
            context["target_gram_table"] = _gram_table(replay.target_gram)

        markdown_content = template(context)
        return html.unescape(markdown_content)


def _gram_table(gram: GramMatrix | None) -> str:
    if gram is None:
        return ""
    return gram.as_frame().to_string()
