"""
Batch verification: run the selected checks over the selected records.

Records are the unit of work. With more than one job they are spread over a
process pool; results are merged back in catalog order so the report does not
depend on the worker count.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Iterable, Sequence

from tqdm import tqdm

from perfect_delaunay.checks import CHECKS, RecordContext, VerifyOptions
from perfect_delaunay.exceptions import UnknownCheckError
from perfect_delaunay.schemas.catalog_schema import PolytopeRecord
from perfect_delaunay.schemas.report_schema import CheckResult, VerificationReport
from perfect_delaunay.services.catalog_service import Catalog, load_catalog

log = logging.getLogger(__name__)


def select_checks(names: Iterable[str] | None) -> list[str]:
    """Check names in report order; None selects all."""
    if names is None:
        return list(CHECKS)
    wanted = set()
    for name in names:
        if name not in CHECKS:
            raise UnknownCheckError(name, CHECKS)
        wanted.add(name)
    return [name for name in CHECKS if name in wanted]


def select_records(catalog: Catalog, ids: Iterable[str] | None) -> list[PolytopeRecord]:
    """Records in catalog order; raises UnknownRecordError for a bad id."""
    if ids is None:
        return list(catalog.records)
    wanted = {catalog.get(i).id for i in ids}
    return [r for r in catalog.records if r.id in wanted]


def verify_record(
    record: PolytopeRecord,
    catalog: Catalog,
    check_names: Sequence[str],
    options: VerifyOptions,
) -> list[CheckResult]:
    ctx = RecordContext(record, catalog, options)
    results = [CHECKS[name].execute(ctx) for name in check_names]
    log.info("%s: %s", record.id, " ".join(f"{r.check}={r.status.value}" for r in results))
    return results


def _verify_in_worker(
    catalog_path: str | None,
    record_id: str,
    check_names: Sequence[str],
    options: VerifyOptions,
) -> list[CheckResult]:
    catalog = load_catalog(catalog_path)
    return verify_record(catalog.get(record_id), catalog, check_names, options)


def run_verification(
    catalog_path: str | Path | None = None,
    record_ids: Iterable[str] | None = None,
    check_names: Iterable[str] | None = None,
    jobs: int = 1,
    options: VerifyOptions | None = None,
    progress: bool = False,
) -> VerificationReport:
    options = options or VerifyOptions()
    catalog = load_catalog(catalog_path)
    records = select_records(catalog, record_ids)
    checks = select_checks(check_names)
    log.info("verifying %d records, %d checks each, %d jobs", len(records), len(checks), jobs)

    per_record: dict[str, list[CheckResult]] = {}
    with tqdm(total=len(records), desc="verify", unit="record", disable=not progress) as bar:
        if jobs <= 1:
            for record in records:
                bar.set_postfix_str(record.id)
                per_record[record.id] = verify_record(record, catalog, checks, options)
                bar.update()
        else:
            path = str(catalog_path) if catalog_path is not None else None
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = {
                    pool.submit(_verify_in_worker, path, r.id, checks, options): r.id
                    for r in records
                }
                for future in as_completed(futures):
                    per_record[futures[future]] = future.result()
                    bar.update()

    ordered = [result for record in records for result in per_record[record.id]]
    return VerificationReport(results=tuple(ordered))
