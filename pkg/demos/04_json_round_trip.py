"""Protocols and sets as JSON, then re-verified from the files alone."""

import json
import tempfile
from pathlib import Path

from loccdisc import jsonio
from loccdisc.engine import verify_perfect
from loccdisc.protocols import build_protocol, states_for

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "tripartite.json"
    path.write_text(jsonio.dumps(jsonio.protocol_to_json(build_protocol("3", (4, 6, 8)))))
    print(f"wrote {path.stat().st_size} bytes")
    prot = jsonio.protocol_from_json(json.loads(path.read_text()))
    rep = verify_perfect(prot, states_for(prot), post_selected=True)
    doc = jsonio.report_to_json(rep)
    print("perfect:", doc["perfect"])
    print("first state:", json.dumps(doc["states"][0], indent=1))
    for note in prot.notes[:2]:
        print("note:", note)
