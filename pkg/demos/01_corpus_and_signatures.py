"""
Corpus loading and color signatures
===================================

Generate a small synthetic corpus on disk, load it through the manifest,
and look at the position-color signature of one keyframe.
"""

import tempfile
from pathlib import Path

from kisengine import load_manifest, validate_corpus
from kisengine.colorsketch import extract_signature
from kisengine.synth import generate_corpus

workdir = Path(tempfile.mkdtemp(prefix="kis-demo-"))
manifest = generate_corpus(workdir, n_videos=4, shots_per_video=6, seed=1,
                           concept_labels=8)
print(f"corpus written under {workdir}")

corpus = load_manifest(manifest)
print(f"loaded {len(corpus.videos)} videos, {len(corpus.shots)} shots, "
      f"banks: {sorted(corpus.banks)}")
print(f"validation violations: {validate_corpus(corpus)}")

# every video keeps its shots in time order
video = corpus.videos["v00"]
print(f"\nvideo v00 ({video.duration_s:.0f}s): {video.shot_ids}")

shot = corpus.shots[video.shot_ids[0]]
print(f"\nfirst shot [{shot.start_s:.0f}s..{shot.end_s:.0f}s] "
      f"description: {shot.description!r}")

# decode its keyframe and cluster it into weighted position-color centroids
kf = corpus.keyframe(shot.id)
print(f"keyframe {kf.width}x{kf.height}")

sig = extract_signature(kf, k=8, shot_id=shot.id)
print(f"\nsignature has {len(sig.centroids)} centroids (quadrant image -> 4):")
for c in sig.centroids:
    print(f"  at ({c.x:.2f}, {c.y:.2f})  weight {c.weight:.2f}  "
          f"Lab ({c.color.L:6.1f}, {c.color.a:6.1f}, {c.color.b:6.1f})")
