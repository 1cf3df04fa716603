import logging
import asyncio
from fastapi import APIRouter, Depends, HTTPException, BackgroundTasks

from app.core.config import settings
from app.schemas.report import VerificationJob, VerificationRequest
from app.services import verification_service
from app.db.report_store import ReportStore, get_store
from app.db import report_store as jobs_db

router = APIRouter()

async def run_verification_job(job: VerificationJob, row: int | None, maxlen: int | None, report_store: ReportStore):
    """
    Background task: run the suite in a worker thread and store its report on the job.
    """
    async with report_store.slots:
        await jobs_db.update_job(job.id, {"status": "running"}, report_store)
        try:
            report = await asyncio.to_thread(
                verification_service.run_suite, job.suite, window=job.max_degree, row=row, maxlen=maxlen
            )
            status = "passed" if report.ok else "failed"
            await jobs_db.update_job(job.id, {"status": status, "report": report}, report_store)
            logging.info(f"Verification {job.id} ({job.suite}) finished: {status}.")
        except Exception as e:
            logging.error(f"Verification {job.id} ({job.suite}) raised an error: {e}", exc_info=True)
            await jobs_db.update_job(job.id, {"status": "error", "error": str(e)}, report_store)


@router.post("/verifications", response_model=VerificationJob, status_code=201)
async def start_verification(
    request: VerificationRequest,
    background_tasks: BackgroundTasks,
    report_store: ReportStore = Depends(get_store)
):
    """
    Queues a verification suite.

    The job is stored with status `queued` and returned at once; a background
    task runs the suite and moves it to `passed`, `failed` or `error`.
    """
    if request.suite not in verification_service.SUITE_NAMES:
        raise HTTPException(
            status_code=400,
            detail=f"Unknown suite {request.suite!r}; choose one of {', '.join(verification_service.SUITE_NAMES)}.",
        )
    window = request.max_degree
    if window is None:
        window = verification_service.default_window(request.suite)
    if window > settings.HARD_CAP:
        raise HTTPException(status_code=400, detail=f"max_degree may not exceed {settings.HARD_CAP}.")

    job = VerificationJob(suite=request.suite, max_degree=window)
    await jobs_db.create_job(job, report_store)
    background_tasks.add_task(run_verification_job, job, request.row, request.maxlen, report_store)
    return job


@router.get("/verifications/{job_id}", response_model=VerificationJob)
async def get_verification(
    job_id: str,
    report_store: ReportStore = Depends(get_store)
):
    """
    Retrieves the status of a verification job, and its report once finished.
    """
    job = await jobs_db.get_job_by_id(job_id, report_store)
    if not job:
        raise HTTPException(status_code=404, detail="Verification not found")
    return job
