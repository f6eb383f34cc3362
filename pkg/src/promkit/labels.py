"""The three-way prominence label alphabet shared across the toolkit."""

P0 = "p0"
P1 = "p1"
P2 = "p2"

#: Canonical ordering: none < intermediate < strong.
LABELS = (P0, P1, P2)

LABEL_TO_INDEX = {lab: i for i, lab in enumerate(LABELS)}


def check_label(label: str) -> str:
    if label not in LABEL_TO_INDEX:
        raise ValueError(f"unknown prominence label {label!r} (expected one of {LABELS})")
    return label
