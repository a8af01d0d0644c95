"""
Report archive on top of aiosqlite.

Runs of the CLI can be recorded in a local SQLite file so that earlier
results can be listed and compared. This module handles:
- Initializing the archive and its table.
- Saving a finished report.
- Listing and fetching saved reports.
"""
import hashlib
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import aiosqlite

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


# --- Archive Initialization ---

async def init_archive(path: PathLike) -> None:
    """
    Creates the reports table if it does not exist yet.

    The parent directory of the archive file is created when missing.
    """
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    async with aiosqlite.connect(path) as db:
        await db.execute('''
            CREATE TABLE IF NOT EXISTS reports (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                command TEXT NOT NULL,
                digest TEXT NOT NULL,
                report TEXT NOT NULL,
                created_at DATETIME DEFAULT CURRENT_TIMESTAMP
            )
        ''')
        await db.commit()


# --- Reports ---

async def save_report(path: PathLike, command: str, report: Dict[str, Any]) -> int:
    """
    Stores one report.

    Args:
        path: The archive file.
        command: The subcommand that produced the report.
        report: The machine-readable report.

    Returns:
        The id of the new row.
    """
    body = json.dumps(report, ensure_ascii=False, sort_keys=True)
    digest = hashlib.sha256(body.encode('utf-8')).hexdigest()
    await init_archive(path)
    async with aiosqlite.connect(path) as db:
        cursor = await db.execute(
            "INSERT INTO reports (command, digest, report, created_at) VALUES (?, ?, ?, ?)",
            (command, digest, body, datetime.now().isoformat(timespec='seconds'))
        )
        await db.commit()
        row_id = cursor.lastrowid
    logger.info(f"Report #{row_id} ({command}) archived in {path}")
    return row_id


async def list_reports(path: PathLike, limit: int = 20, command: Optional[str] = None) -> List[Dict[str, Any]]:
    """Most recent reports first, without their bodies."""
    if not Path(path).exists():
        return []
    query = "SELECT id, command, digest, created_at FROM reports"
    params: tuple = ()
    if command:
        query += " WHERE command = ?"
        params = (command,)
    query += " ORDER BY id DESC LIMIT ?"
    params += (limit,)
    async with aiosqlite.connect(path) as db:
        async with db.execute(query, params) as cursor:
            rows = await cursor.fetchall()
    return [{'id': r[0], 'command': r[1], 'digest': r[2], 'created_at': r[3]} for r in rows]


async def get_report(path: PathLike, report_id: int) -> Optional[Dict[str, Any]]:
    if not Path(path).exists():
        return None
    try:
        async with aiosqlite.connect(path) as db:
            async with db.execute("SELECT report FROM reports WHERE id = ?", (report_id,)) as cursor:
                row = await cursor.fetchone()
                if row:
                    return json.loads(row[0])
    except aiosqlite.Error as e:
        logger.error(f"Error reading report {report_id} from {path}: {e}")
    return None
