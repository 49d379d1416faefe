"""JSON serialization of search reports."""

from __future__ import annotations

import json
from typing import Any

from ..ratpoly import format_polynomial, parse_polynomial
from .certificates import Cofactor, DarbouxCertificate
from .search import BranchSummary, SearchReport


def certificate_to_dict(cert: DarbouxCertificate) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": cert.kind}
    if cert.kind == "polynomial":
        out["f"] = format_polynomial(cert.f)
    else:
        out["g"] = format_polynomial(cert.g)
        out["h"] = format_polynomial(cert.h)
    out["cofactor"] = [str(c) for c in cert.cofactor.as_tuple()]
    out["verified"] = cert.verified
    return out


def certificate_from_dict(data: dict[str, Any]) -> DarbouxCertificate:
    cof = Cofactor.from_sequence(data["cofactor"])
    if data["kind"] == "polynomial":
        cert = DarbouxCertificate.polynomial(parse_polynomial(data["f"]), cof)
    else:
        cert = DarbouxCertificate.exponential(parse_polynomial(data["g"]), parse_polynomial(data["h"]), cof)
    # the flag is informational on load; callers re-verify against their field
    return DarbouxCertificate(cert.kind, cert.invariant, cert.cofactor, verified=bool(data.get("verified", False)))


def report_to_dict(report: SearchReport) -> dict[str, Any]:
    return {
        "system": report.system,
        "degree_bound": report.degree_bound,
        "mode": report.mode,
        "certificates": [certificate_to_dict(c) for c in report.certificates],
        "branches": [{"constraints": list(b.constraints), "nullity": b.nullity} for b in report.branches],
        "unresolved": list(report.unresolved),
        "undetermined": list(report.undetermined),
        "partial": report.partial,
        "notes": list(report.notes),
    }


def report_to_json(report: SearchReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_from_dict(data: dict[str, Any]) -> SearchReport:
    return SearchReport(
        system=data["system"],
        degree_bound=data["degree_bound"],
        mode=data["mode"],
        certificates=[certificate_from_dict(c) for c in data["certificates"]],
        branches=[BranchSummary(tuple(b["constraints"]), b["nullity"]) for b in data["branches"]],
        unresolved=list(data.get("unresolved", [])),
        partial=bool(data.get("partial", False)),
        notes=list(data.get("notes", [])),
        undetermined=list(data.get("undetermined", [])),
    )
