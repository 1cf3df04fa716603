import asyncio
from typing import Dict, Optional

from app.core.config import settings
from app.schemas.report import VerificationJob


class ReportStore:
    jobs: Dict[str, VerificationJob] = {}
    lock: Optional[asyncio.Lock] = None
    slots: Optional[asyncio.Semaphore] = None

store = ReportStore()

async def get_store() -> ReportStore:
    """
    Returns the application's job store.
    Raises an exception if the store is not opened.
    """
    if store.lock is None or store.slots is None:
        raise Exception("Report store not initialized. Ensure `open_store` is called on application startup.")
    return store

async def open_store():
    """Creates the lock and the worker semaphore inside the running event loop."""
    store.jobs = {}
    store.lock = asyncio.Lock()
    store.slots = asyncio.Semaphore(max(1, settings.WORKERS))

async def close_store():
    """Drops every stored job."""
    store.jobs = {}
    store.lock = None
    store.slots = None

async def create_job(job: VerificationJob, report_store: ReportStore) -> VerificationJob:
    """
    Inserts a new verification job.
    """
    async with report_store.lock:
        report_store.jobs[job.id] = job
    return job

async def get_job_by_id(job_id: str, report_store: ReportStore) -> VerificationJob | None:
    """
    Retrieves a verification job by its ID.
    """
    async with report_store.lock:
        return report_store.jobs.get(job_id)

async def update_job(job_id: str, data: dict, report_store: ReportStore) -> None:
    """
    Updates a verification job; unknown ids are ignored.
    """
    async with report_store.lock:
        job = report_store.jobs.get(job_id)
        if job is not None:
            report_store.jobs[job_id] = job.model_copy(update=data)
