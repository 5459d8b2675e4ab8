"""Serializes a completed run's event timeline to VCD and JSON-lines files.

Identifier codes and scopes follow signal registration order so exports are
byte-stable and can be pinned as golden files. Negative-time events are
clamped into the VCD initial-values block; the JSONL dump keeps them as-is.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .environment import SimulationRun
from .signals import Signal, SignalKind

_VCD_ID_BASE = 94
_VCD_ID_FIRST = 33  # '!'

_VAR_DECLS = {
    SignalKind.BOOL: ("wire", 1),
    SignalKind.INT: ("reg", 64),
    SignalKind.REAL: ("real", 64),
    SignalKind.TEXT: ("string", 1),
}


@dataclass(frozen=True)
class TraceRecord:
    time_mu: int
    device: str
    signal: str
    kind: SignalKind
    value: object


def _vcd_id(index: int) -> str:
    chars = []
    while True:
        chars.append(chr(_VCD_ID_FIRST + index % _VCD_ID_BASE))
        index //= _VCD_ID_BASE
        if index == 0:
            return "".join(chars)
        index -= 1


def _render_real(value: float) -> str:
    return f"{value:.17g}"


def _vcd_change(kind: SignalKind, value, code: str) -> str:
    if kind is SignalKind.BOOL:
        return f"{int(value)}{code}"
    if kind is SignalKind.INT:
        return f"b{value & 0xFFFF_FFFF_FFFF_FFFF:b} {code}"
    if kind is SignalKind.REAL:
        return f"r{_render_real(value)} {code}"
    text = "".join("_" if ch.isspace() else ch for ch in value)
    return f"s{text} {code}"


def _vcd_unknown(kind: SignalKind, code: str) -> str | None:
    if kind is SignalKind.BOOL:
        return f"x{code}"
    if kind is SignalKind.INT:
        return f"bx {code}"
    return None  # reals and strings have no unknown representation


def records_of(run: SimulationRun) -> list[TraceRecord]:
    """All surviving events, sorted by (time, device, signal)."""
    records = [
        TraceRecord(t, sig.device_name, sig.signal_name, sig.kind, v)
        for sig in run.signals
        for t, v in sig.events()
    ]
    records.sort(key=lambda r: (r.time_mu, r.device, r.signal))
    return records


def export_vcd(run: SimulationRun, path) -> None:
    """Write the run's timeline as a value-change-dump waveform."""
    signals = list(run.signals)
    codes: dict[tuple[str, str], str] = {}
    lines = ["$timescale 1 ns $end"]

    by_device: dict[str, list[Signal]] = {}
    for sig in signals:
        by_device.setdefault(sig.device_name, []).append(sig)
    for device, sigs in by_device.items():
        lines.append(f"$scope module {device} $end")
        for sig in sigs:
            code = _vcd_id(len(codes))
            codes[(sig.device_name, sig.signal_name)] = code
            var_type, width = _VAR_DECLS[sig.kind]
            lines.append(f"$var {var_type} {width} {code} {sig.signal_name} $end")
        lines.append("$upscope $end")
    lines.append("$enddefinitions $end")

    if signals:
        # Initial-values block: last pre-time-0 event wins, else unknown.
        lines.append("$dumpvars")
        for sig in signals:
            code = codes[(sig.device_name, sig.signal_name)]
            negatives = [(t, v) for t, v in sig.events() if t < 0]
            if negatives:
                lines.append(_vcd_change(sig.kind, negatives[-1][1], code))
            else:
                unknown = _vcd_unknown(sig.kind, code)
                if unknown is not None:
                    lines.append(unknown)
        lines.append("$end")

        current_time = None
        for rec in records_of(run):
            if rec.time_mu < 0:
                continue
            if rec.time_mu != current_time:
                current_time = rec.time_mu
                lines.append(f"#{current_time}")
            lines.append(_vcd_change(rec.kind, rec.value, codes[(rec.device, rec.signal)]))

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _summary_of(run: SimulationRun) -> dict:
    stats = run.stats
    return {
        "event_count": stats.event_count,
        "sync_count": stats.sync_count,
        "timeline_length_mu": stats.timeline_length_mu,
        "config": {
            "mode": run.config.mode.value,
            "sync_slack_mu": run.config.sync_slack_mu,
            "ref_period_s": run.config.ref_period_s,
            "seed": run.config.seed,
        },
    }


def export_jsonl(run: SimulationRun, path) -> None:
    """Write one JSON object per event plus a final summary object.

    Wall-clock time is deliberately not exported, so two runs with the same
    seed and configuration produce byte-identical files.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records_of(run):
            fh.write(json.dumps(
                {
                    "time_mu": rec.time_mu,
                    "device": rec.device,
                    "signal": rec.signal,
                    "kind": rec.kind.value,
                    "value": rec.value,
                },
                sort_keys=False,
            ))
            fh.write("\n")
        fh.write(json.dumps({"summary": _summary_of(run)}))
        fh.write("\n")


def read_jsonl(path) -> tuple[list[dict], dict | None]:
    """Parse a JSONL dump into (event records, summary or None)."""
    records = []
    summary = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "summary" in obj:
                summary = obj["summary"]
            else:
                records.append(obj)
    return records, summary
