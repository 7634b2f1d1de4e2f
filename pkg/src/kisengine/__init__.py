"""Interactive known-item search over shot-segmented video corpora.

Query modalities (color sketch, full text, weighted boolean concepts)
each produce a ranked shot list; lists are fused with reciprocal-rank
fusion, filtered, re-ranked by relevance feedback, and browsed grouped
by video.  A session layer adds timed tasks, interaction logs, and a
deterministic benchmark harness; an HTTP service exposes the whole
thing to a browser UI.
"""

from .colorsketch import (
    ColorIndex,
    ColorSignature,
    LabColor,
    SignatureCentroid,
    SketchPoint,
    SketchQuery,
    build_color_index,
    delta_e76,
    extract_signature,
    lab_to_rgb,
    load_color_index,
    make_palette,
    rank_by_sketch,
    recommend_colors,
    rgb_to_lab,
    save_color_index,
    score_sketch,
    sketch_from_signature,
    with_recommendation,
)
from .concepts import (
    And,
    ConceptExpr,
    Leaf,
    Not,
    Or,
    ParseError,
    UnresolvedLabelError,
    eval_expr,
    list_concepts,
    parse_concept_query,
    print_expr,
    rank_by_expr,
)
from .config import EngineConfig
from .corpus import (
    Corpus,
    CorpusError,
    Keyframe,
    ScoreBank,
    Shot,
    Video,
    Violation,
    decode_keyframe,
    encode_keyframe,
    load_manifest,
    validate_corpus,
)
from .engine import CompositeQuery, Engine, VideoGroup
from .filters import (
    FilterFlags,
    FilterVerdict,
    apply_filters,
    detect_black_border,
    is_black_and_white,
)
from .fusion import feedback_rerank, fuse
from .harness import AgentOp, HarnessReport, TaskReport, load_agent, load_tasks, run_harness
from .ranking import RankedList
from .session import (
    BudgetExpiredError,
    KisTask,
    LogEvent,
    Session,
    SessionManager,
    SimulatedClock,
    SystemClock,
    replay_log,
    score_session,
)
from .textsearch import TextIndex, TextQuery, build_text_index, search_text, tokenize

__version__ = "0.1.0"
