"""Record real service responses for the frontend golden tests.

Writes one fixture per program: the session-create document plus the full
entry sequence (initial entry, then one per step to the fixed point).
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from simplipy.service import create_app

PROGRAMS = {
    "p2": "i = 0\nwhile i < 3:\n    i = i + 1\n    if i == 2:\n        break\n    pass\npass",
    "p3": "def f(a):\n    b = a + 1\n    return b\nr = f(41)\npass",
    "p4": (
        "def outer():\n    x = 0\n    def inner():\n        nonlocal x\n        x = x + 1\n"
        "        return x\n    r = inner()\n    r = inner()\n    return r\nres = outer()\npass"
    ),
}


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())
    for name, source in PROGRAMS.items():
        create = client.post("/api/sessions", json={"source": source}).json()
        sid = create["sessionId"]
        entries = [client.get(f"/api/sessions/{sid}").json()]
        while entries[-1]["state"]["status"]["kind"] == "running":
            entries.append(client.post(f"/api/sessions/{sid}/step").json())
        create.pop("sessionId")
        doc = {"source": source, "create": create, "entries": entries}
        path = out_dir / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True), encoding="utf-8")
        print(f"wrote {path} ({len(entries)} entries)")


if __name__ == "__main__":
    main()
