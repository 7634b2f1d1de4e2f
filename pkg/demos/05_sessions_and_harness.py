"""
Timed sessions and the benchmark harness
========================================

Plant a known-item task in a synthetic corpus, script an agent that
sketches the target's own colors and submits the top hit, run it under a
simulated clock, and replay the session log to confirm determinism.
"""

import tempfile
from pathlib import Path

from kisengine import load_manifest
from kisengine.colorsketch import sketch_from_signature
from kisengine.engine import Engine
from kisengine.harness import AgentOp, run_harness
from kisengine.session import replay_log, score_session
from kisengine.synth import generate_corpus, plant_task, target_shot

workdir = Path(tempfile.mkdtemp(prefix="kis-demo-"))
corpus = load_manifest(generate_corpus(workdir, 12, 10, seed=5, concept_labels=6))
engine = Engine.build(corpus)

task = plant_task(corpus, "demo-task", video_index=2, target_start_s=15.0)
print(f"task: find a 20s window of {task.video_id} within {task.budget_s:.0f}s")

# the "user" saw the target clip; the scripted agent sketches its colors
sid = target_shot(corpus, task)
sketch = sketch_from_signature(engine.color_index.signatures[sid])
agent = [
    AgentOp(3.0, "query", {"body": {"sketch": sketch.to_dict()}}),
    AgentOp(5.0, "browse", {"view": "grouped"}),
    AgentOp(8.0, "positive", {"shot_id": sid}),
    AgentOp(9.0, "feedback", {"lambda": 0.5}),
    AgentOp(12.0, "submit", {"rank": 1}),
]

report = run_harness(engine, [task], agent)
t = report.tasks[0]
print(f"\nsolved: {t.solved}, correct at t={t.t_correct:.0f}s, "
      f"wrong submissions: {t.wrong_count}, score: {t.score:.2f}")

print("\nsession log:")
for event in t.log:
    print(f"  t={event.at:5.1f}s  {event.kind}")

triples = replay_log(engine, t.log)
print(f"\nreplayed {len(triples)} ranked lists; all bit-identical: "
      f"{all(stored == recomputed for _, stored, recomputed in triples)}")
