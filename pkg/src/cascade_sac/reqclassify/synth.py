"""Deterministic synthetic requirements corpus with planted security keywords.

    python -m cascade_sac.reqclassify.synth fixtures/synth.csv
"""

from __future__ import annotations

import random
import sys

from .data import Label, RequirementRecord, dump_dataset

_PROJECTS = {
    "braking": (["brake controller", "ABS module", "pedal sensor unit"], ["wheel speed data", "pressure readings", "fault codes"], ["driver", "service technician"]),
    "charging": (["charging station", "wallbox", "billing backend"], ["charging sessions", "meter values", "tariff tables"], ["vehicle owner", "operator"]),
    "headlamp": (["headlamp ECU", "light switch module", "body controller"], ["beam commands", "lamp status", "calibration data"], ["driver", "workshop tool"]),
    "infotainment": (["head unit", "media server", "navigation app"], ["contact lists", "route history", "media files"], ["passenger", "driver"]),
    "telematics": (["telematics unit", "fleet portal", "cloud gateway"], ["position reports", "trip logs", "vehicle status"], ["fleet manager", "dispatcher"]),
    "diagnostics": (["diagnostic gateway", "OBD interface", "test bench"], ["diagnostic sessions", "error memory", "sensor snapshots"], ["technician", "tester"]),
}

_SEC = [
    "The {comp} shall encrypt all {data} using authenticated encryption before transmission.",
    "The {comp} shall authenticate every {actor} before granting access to {data}.",
    "Access to the {comp} maintenance interface shall require password authentication and role based authorization.",
    "The {comp} shall verify the digital signature of each firmware image during secure boot.",
    "The {comp} shall record failed login attempts and raise an intrusion alert.",
    "The {comp} shall protect the integrity of {data} against tampering with a message authentication code.",
    "Cryptographic keys used by the {comp} shall be stored in a hardware security module.",
    "The {comp} shall reject {data} that fail certificate validation.",
    "The {comp} shall lock the account of a {actor} after five failed authentication attempts.",
    "Session tokens issued by the {comp} shall expire after 15 minutes to prevent unauthorized access.",
    "The {comp} shall restrict access to {data} to authorized users only.",
    "The {comp} shall detect and block replay attacks on {data}.",
]

_NONSEC = [
    "The {comp} shall display {data} within 2 seconds of a {actor} request.",
    "The {comp} shall operate in ambient temperatures between -40 and 85 degrees Celsius.",
    "The {comp} shall store up to 500 entries of {data}.",
    "The {comp} shall provide a user interface in English and German.",
    "The {comp} shall report {data} to the {actor} once per minute.",
    "The {comp} shall start up within 300 milliseconds after power on.",
    "The {comp} shall consume less than 2 watts in standby mode.",
    "The {comp} shall allow the {actor} to export {data} as a PDF report.",
    "The {comp} shall show a warning when {data} exceed the configured limit.",
    "The {comp} shall be serviceable by a {actor} with standard tools.",
    "The {comp} shall recover normal operation within 5 seconds after a voltage drop.",
    "The {comp} shall sort {data} by date in ascending order.",
    "The {comp} shall keep {data} for at least 30 days.",
    "The {comp} shall use the metric unit system for all {data}.",
    "The {comp} shall send {data} to the {actor} at the end of each trip.",
    "The {comp} shall support a screen brightness of at least 800 nits.",
]

SECTIONS = 6
PER_SECTION = 10


def synthetic_corpus(seed: int = 7, per_project: int = 60, sec_fraction: float = 0.2) -> list[RequirementRecord]:
    """Six projects, ``sec_fraction`` of each project's requirements security-related.

    Security requirements land in the first half of the sections, so the
    remaining sections are all non-security.
    """
    rng = random.Random(seed)
    records = []
    n_sec = round(per_project * sec_fraction)
    for project, (comps, data, actors) in _PROJECTS.items():
        sec_pool = rng.sample(_SEC, 9)
        nonsec_pool = rng.sample(_NONSEC, 12)

        def fill(template: str) -> str:
            return template.format(comp=rng.choice(comps), data=rng.choice(data), actor=rng.choice(actors))

        sec = [fill(rng.choice(sec_pool)) for _ in range(n_sec)]
        nonsec = [fill(rng.choice(nonsec_pool)) for _ in range(per_project - n_sec)]
        n_sections = max(1, per_project // PER_SECTION)
        front = max(1, n_sections // 2) * PER_SECTION
        slots = list(range(front))
        rng.shuffle(slots)
        sec_slots = set(slots[:n_sec])
        sec_iter, nonsec_iter = iter(sec), iter(nonsec)
        for i in range(per_project):
            is_sec = i in sec_slots
            text = next(sec_iter) if is_sec else next(nonsec_iter)
            records.append(
                RequirementRecord(
                    project=project,
                    section=f"S{i // PER_SECTION + 1}",
                    req_id=f"{project[:3].upper()}-{i + 1:03d}",
                    text=text,
                    label=Label.SEC if is_sec else Label.NONSEC,
                )
            )
    return records


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "-"
    if out == "-":
        dump_dataset(synthetic_corpus(), sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            dump_dataset(synthetic_corpus(), fh)
