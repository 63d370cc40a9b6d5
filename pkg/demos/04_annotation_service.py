"""Run the annotation service over HTTP and walk one annotator through a
short queue, then export the collected judgments.

Run from the repository root:

    python3 demos/04_annotation_service.py
"""

import tempfile
import threading
import time
from pathlib import Path

import requests
import uvicorn

from qgkit import FakeBackend, generate, load_document
from qgkit.annotation import AnnotationStore
from qgkit.pipeline import QGConfig, sample_eval_set
from qgkit.service import create_app

DATA = Path(__file__).parent / "data"
PORT = 8765

doc = load_document(DATA / "textbook.txt")
qs = generate(doc, "original", FakeBackend(), QGConfig(run_id="demo-service"))
eval_set = sample_eval_set([qs], quota=5, seed=3)

log_path = Path(tempfile.mkdtemp()) / "annotations.jsonl"
store = AnnotationStore(
    log_path, eval_set, {p.pair_id: p for p in qs.pairs}, ["A1", "A2", "A3"]
)

server = uvicorn.Server(uvicorn.Config(create_app(store), port=PORT, log_level="error"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)
base = f"http://127.0.0.1:{PORT}"
print(f"service listening on {base}")

guidelines = requests.get(f"{base}/api/guidelines").json()
print(f"\nannotation protocol ({len(guidelines['categories'])} criteria):")
for entry in guidelines["categories"]:
    print(f"  {entry['category']}: {entry['prompt']}")

# One annotator works through their queue. Odd items get the skip shortcut
# (acceptable=yes implies yes everywhere), even items get explicit judgments.
print("\nA1 annotates:")
position = 0
while True:
    card = requests.get(f"{base}/api/next", params={"annotator": "A1"}).json()
    if card.get("done"):
        print("  queue complete")
        break
    position += 1
    if position % 2:
        label = {"acceptable": "yes"}
    else:
        label = {"acceptable": "no", "grammatical": "yes",
                 "interpretable": "no", "relevant": "yes", "correct": "yes"}
    response = requests.post(f"{base}/api/annotations", json={
        "pair_id": card["pair_id"],
        "annotator_id": "A1",
        "label": label,
    })
    print(f"  {card['position']}/{card['total']} {card['question']!r} "
          f"-> acceptable={label['acceptable']} (revision {response.json()['revision']})")

print("\nprogress:", requests.get(f"{base}/api/progress").json())

export = requests.get(f"{base}/api/export").json()
print(f"\nexported {len(export)} expanded records; first:")
print(" ", export[0])

server.should_exit = True
thread.join(timeout=5)
print(f"\nannotation log persisted at {log_path}")
