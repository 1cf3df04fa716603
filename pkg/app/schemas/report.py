from pydantic import BaseModel, Field
from typing import Any, Dict, List, Literal, Optional
from datetime import datetime, timezone
from uuid import uuid4

CheckStatus = Literal["pass", "fail", "skip", "info"]

class CheckResult(BaseModel):
    """One named assertion (or diagnostic) inside a verification report."""
    name: str
    status: CheckStatus
    details: Dict[str, Any] = Field(default_factory=dict, description="Counts, failing vectors and expanded sides, all as plain strings and numbers.")

class Report(BaseModel):
    """The stable report envelope emitted by the CLI and the API."""
    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    results: List[CheckResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(result.status != "fail" for result in self.results)

    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if result.status == "fail"]

class VerificationJob(BaseModel):
    """Schema for a verification run submitted through the API."""
    id: str = Field(default_factory=lambda: uuid4().hex)
    suite: str
    max_degree: int
    status: str = "queued"
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    report: Optional[Report] = None
    error: Optional[str] = None

class VerificationRequest(BaseModel):
    """Request model for starting a verification suite."""
    suite: str = Field("all", description="A suite name such as 'appendix-a' or 'all'.")
    max_degree: Optional[int] = Field(None, ge=0, le=12, description="Total-degree window; defaults to MAX_DEGREE.")
    row: Optional[int] = Field(None, ge=0, le=3, description="Action-table row for the presentation suite.")
    maxlen: Optional[int] = Field(None, ge=1, le=12, description="Word length for the relation, intertwiner and associativity checks.")


def passed(name: str, **details: Any) -> CheckResult:
    return CheckResult(name=name, status="pass", details=details)


def failed(name: str, **details: Any) -> CheckResult:
    return CheckResult(name=name, status="fail", details=details)


def skipped(name: str, **details: Any) -> CheckResult:
    return CheckResult(name=name, status="skip", details=details)


def info(name: str, **details: Any) -> CheckResult:
    return CheckResult(name=name, status="info", details=details)


def outcome(name: str, ok: bool, **details: Any) -> CheckResult:
    return passed(name, **details) if ok else failed(name, **details)
