"""
Run reports: one per CLI invocation, rendered as text or as JSON.

Reports are deterministic. They hold no timestamps or absolute paths,
only input names with their content digests, so repeated runs on the
same inputs produce identical bytes.
"""
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2


def describe_input(path: Union[str, Path]) -> Dict[str, str]:
    path = Path(path)
    digest = hashlib.sha256(path.read_bytes()).hexdigest() if path.is_file() else None
    return {'name': path.name, 'sha256': digest}


@dataclass
class RunReport:
    command: str
    results: Dict[str, Any] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)
    inputs: List[Dict[str, Any]] = field(default_factory=list)
    citations: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK
    error: str = ""

    @classmethod
    def failure(cls, command: str, message: str, exit_code: int) -> "RunReport":
        return cls(command=command, lines=[f"error: {message}"], exit_code=exit_code, error=message)

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK

    def as_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'command': self.command,
            'inputs': self.inputs,
            'results': self.results,
            'citations': self.citations,
            'exit_code': self.exit_code,
        }
        if self.error:
            data['error'] = self.error
        return data

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False, sort_keys=True, indent=2)

    def to_text(self) -> str:
        out = list(self.lines)
        if self.citations:
            out.append("")
            out.extend(f"  [{c}]" for c in self.citations)
        return "\n".join(out)

    def render(self, as_json: bool) -> str:
        return self.to_json() if as_json else self.to_text()
