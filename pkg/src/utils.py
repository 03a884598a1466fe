import json
import re
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd


class ContractViolation(ValueError):
    """A precondition of an operation does not hold."""


class SearchExhausted(RuntimeError):
    """A bounded search ran past its bound without an answer."""

    def __init__(self, message: str, bound: int, partial=None):
        super().__init__(f"{message} (bound {bound})")
        self.bound = bound
        self.partial = partial


def require(condition: bool, message: str) -> None:
    """Raise ContractViolation with message unless condition holds"""
    if not condition:
        raise ContractViolation(message)


def ensure(condition: bool, message: str) -> None:
    """Internal consistency check that is not stripped under -O"""
    if not condition:
        raise AssertionError(message)


def validate_n_input(text: str) -> bool:
    """Validate a twist parameter typed by the user"""
    if not text or not text.strip():
        return False
    return re.match(r"^\s*\d+\s*$", text) is not None and int(text) >= 1


def parse_int_list(text: str) -> List[int]:
    """Parse '1,5,9' into [1, 5, 9]"""
    if not text or not text.strip():
        return []
    try:
        return [int(part) for part in re.split(r"[,\s]+", text.strip()) if part]
    except ValueError:
        raise ContractViolation(f"not a comma separated integer list: {text!r}")


def parse_triple(text: str):
    """Parse 'a,b,c' into a validated TwistTriple"""
    from family import TwistTriple

    values = parse_int_list(text)
    require(len(values) == 3, f"a triple needs three integers, got {text!r}")
    return TwistTriple.create(*values)


def parse_bit_matrix(text: str):
    """Parse '0110' style rows separated by ';' or '/' into a BitMatrix"""
    from f2linalg import BitMatrix

    rows = [row.strip() for row in re.split(r"[;/]", text or "") if row.strip()]
    require(bool(rows), "empty matrix")
    require(all(re.match(r"^[01]+$", row) for row in rows), f"matrix rows must be 0/1 strings: {text!r}")
    return BitMatrix.from_rows([[int(ch) for ch in row] for row in rows])


def format_number(num: int) -> str:
    """Format large numbers with K, M suffixes"""
    if num >= 1_000_000:
        return f"{num/1_000_000:.1f}M"
    elif num >= 1_000:
        return f"{num/1_000:.1f}K"
    else:
        return str(num)


def format_factorization(primes: List[int]) -> str:
    """17·73 style product"""
    return "·".join(str(p) for p in primes) if primes else "1"


def get_verdict_emoji(value: Optional[bool]) -> str:
    """Get emoji for a predicate value"""
    if value is None:
        return '➖'
    return '✅' if value else '❌'


def build_summary(record: Dict) -> Dict:
    """Create JSON summary of one instance report for quick sharing"""
    try:
        n = record.get("n")
        verdict = record.get("sha_predicate")
        summary = {
            "analysis_date": datetime.now().isoformat(),
            "parameters": {key: record.get(key) for key in ("triple", "n", "theorem") if key in record},
            "key_metrics": {key: record.get(key) for key in ("s2", "h4", "h8", "d", "pairing") if key in record},
            "sha_predicate": verdict,
            "summary_insight": (
                f"n = {n}: rank 0 and 2-primary Sha of order 4."
                if verdict else
                f"n = {n}: the criterion does not certify rank 0 with Sha[2^inf] = (Z/2)^2."
            )
        }
        return summary

    except Exception as e:
        print(f"❌ Error creating JSON summary: {e}")
        return {"error": f"Failed to create summary: {str(e)}"}


def export_report_json(record: Dict, path: Path) -> str:
    """Save a report dictionary as indented JSON"""
    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(record, f, indent=2, default=str)
        return str(path)
    except OSError as e:
        print(f"❌ Error saving report: {e}")
        return ""


def sweep_to_csv(df: pd.DataFrame, header: Dict, path: Optional[Path] = None) -> str:
    """Render a sweep table as CSV preceded by a '# key=value' parameter row"""
    line = "# " + " ".join(f"{key}={value}" for key, value in header.items())
    text = line + "\n" + df.to_csv(index=False)
    if path is not None:
        Path(path).write_text(text, encoding='utf-8')
    return text
