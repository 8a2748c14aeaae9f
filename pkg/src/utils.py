"""
Report and table I/O for the toolkit.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

from .errors import InputError
from .exactlin import Field
from .schemas import (EnumerationIndex, QuiverDoc, RepresentationDoc, Status, Verdict, algebra_doc, parse_document,
                      representation_doc)

logger = logging.getLogger(__name__)


def report_text(report: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    if isinstance(report, BaseModel):
        report = report.model_dump(mode="json")
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_report(report: Any, output_file: str) -> Path:
    output_path = Path(output_file)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(report_text(report), encoding="utf-8")
    logger.info("saved report to %s", output_path)
    return output_path


def save_table_csv(records: Sequence[Dict[str, Any]], output_file: str) -> pd.DataFrame:
    """Records as CSV, one column per key."""
    output_path = Path(output_file)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame(list(records))
    df.to_csv(output_path, index=False)
    logger.info("saved %d rows to %s", len(df), output_path)
    return df


def load_representation(path: Path, default: Optional[Field] = None):
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read representation document {path}: {exc}")
    doc = parse_document(RepresentationDoc, data)
    return doc.build(default, path.parent)


def load_representation_dir(json_dir: str, default: Optional[Field] = None) -> List[Any]:
    """Every representation document in a directory, in file-name order; index.json is skipped."""
    json_path = Path(json_dir)
    if not json_path.is_dir():
        raise InputError(f"test set directory not found: {json_dir}")
    reps = []
    for json_file in sorted(json_path.glob("*.json")):
        if json_file.name == "index.json":
            continue
        try:
            x = load_representation(json_file, default)
        except InputError as exc:
            raise InputError(exc.message, f"{json_file.name}{exc.location}")
        if not x.label:
            x = type(x)(x.quiver, x.algebra, x.branches, x.arrow_maps, label=json_file.stem)
        reps.append(x)
    logger.info("loaded %d representations from %s", len(reps), json_dir)
    return reps


def write_oracle_dir(result, q, a, bound: Sequence[int], monic_only: bool, seed: int,
                     output_dir: str) -> EnumerationIndex:
    """Representation documents plus index.json and counts.csv."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for k, x in enumerate(result.representations):
        name = f"rep_{k:04d}.json"
        (out / name).write_text(report_text(representation_doc(x)), encoding="utf-8")
        files.append(name)
    index = EnumerationIndex(quiver=QuiverDoc.of(q).model_dump(by_alias=True), algebra=algebra_doc(a),
                             bound=list(bound), monic_only=monic_only, seed=seed, partial=result.partial,
                             visited=result.visited, total=result.total, counts=dict(result.counts), files=files)
    (out / "index.json").write_text(report_text(index), encoding="utf-8")
    save_table_csv([{"dim_vector": key, "count": n} for key, n in result.counts.items()], str(out / "counts.csv"))
    logger.info("wrote %d representations to %s", len(files), out)
    return index


def summarize_verdicts(verdicts: Sequence[Verdict]) -> Dict[str, Any]:
    """Counts per status and the failing checks."""
    counts = {s.value: 0 for s in Status}
    for v in verdicts:
        counts[v.status.value] += 1
    return {
        "total": len(verdicts),
        "by_status": counts,
        "failing": [v.check for v in verdicts if v.status == Status.FAILS],
        "unknown": [v.check for v in verdicts if v.status == Status.UNKNOWN],
    }
