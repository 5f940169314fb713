"""
Run record and artifact models.
"""

import enum
import os
from dataclasses import dataclass, field
from typing import Any, Optional


class RunStatus(str, enum.Enum):
    """Run status enumeration."""

    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class ArtifactType(str, enum.Enum):
    """Artifact type enumeration."""

    CSV = "csv"
    SVG = "svg"
    JSON = "json"
    TXT = "txt"


@dataclass
class Artifact:
    """File written by a run."""

    type: ArtifactType
    file_path: str
    file_size: Optional[int] = None  # Size in bytes

    @classmethod
    def from_path(cls, artifact_type: ArtifactType, file_path: str) -> "Artifact":
        size = os.path.getsize(file_path) if os.path.exists(file_path) else None
        return cls(type=artifact_type, file_path=file_path, file_size=size)

    def __repr__(self):
        return f"<Artifact(type='{self.type.value}', path='{self.file_path}')>"


@dataclass
class RunRecord:
    """Status, progress and outputs of one command run."""

    command: str
    output_dir: str
    status: RunStatus = RunStatus.PENDING
    progress_percent: int = 0
    progress_message: str = "Run queued"
    error_message: Optional[str] = None
    artifacts: list[Artifact] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    result: Any = field(default=None, repr=False)

    def __repr__(self):
        return f"<RunRecord(command='{self.command}', status='{self.status.value}')>"
