"""Dataset loaders (SICK, MED), batch classification, and metric reports."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .conllu import parse_conllu
from .search import EngineContext, InferenceResult, Label, SearchConfig, classify

LABELS = (Label.ENTAIL, Label.CONTRADICT, Label.NEUTRAL)


class DatasetLoadError(ValueError):
    pass


@dataclass(frozen=True)
class NLIPair:
    pair_id: str
    premise: str
    hypothesis: str
    gold: Label
    monotonicity: str | None = None      # upward | downward | none (MED)
    premise_conllu: str | None = None
    hypothesis_conllu: str | None = None


_SICK_LABELS = {
    "ENTAILMENT": Label.ENTAIL,
    "CONTRADICTION": Label.CONTRADICT,
    "NEUTRAL": Label.NEUTRAL,
}


def _column_index(header: list[str], *names: str) -> int | None:
    lowered = [h.strip().lower() for h in header]
    for n in names:
        if n in lowered:
            return lowered.index(n)
    return None


def load_sick(path: str | Path) -> list[NLIPair]:
    """Tab-separated with header pair_ID, sentence_A, sentence_B, entailment_judgment."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        return []
    header = lines[0].split("\t")
    i_id = _column_index(header, "pair_id")
    i_a = _column_index(header, "sentence_a")
    i_b = _column_index(header, "sentence_b")
    i_l = _column_index(header, "entailment_judgment", "entailment_label", "gold_label")
    if None in (i_id, i_a, i_b, i_l):
        raise DatasetLoadError(f"{path}: missing required SICK columns in header")
    pairs: list[NLIPair] = []
    for row_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split("\t")
        label_str = cols[i_l].strip().upper()
        if label_str not in _SICK_LABELS:
            raise DatasetLoadError(f"{path} row {row_no}: unknown label {cols[i_l]!r}")
        pairs.append(
            NLIPair(
                pair_id=cols[i_id].strip(),
                premise=cols[i_a].strip(),
                hypothesis=cols[i_b].strip(),
                gold=_SICK_LABELS[label_str],
            )
        )
    return pairs


_MED_LABELS = {
    "entailment": Label.ENTAIL,
    "neutral": Label.NEUTRAL,
    "non-entailment": Label.NEUTRAL,
}


def load_med(path: str | Path) -> list[NLIPair]:
    """MED release format: tab-separated with genre tags carrying the
    upward/downward monotonicity marking; labels are two-way."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        return []
    header = lines[0].split("\t")
    i_id = _column_index(header, "pair_id", "index")
    i_genre = _column_index(header, "genre")
    i_a = _column_index(header, "sentence1", "sentence_a", "premise")
    i_b = _column_index(header, "sentence2", "sentence_b", "hypothesis")
    i_l = _column_index(header, "gold_label", "entailment_judgment", "label")
    if None in (i_id, i_genre, i_a, i_b, i_l):
        raise DatasetLoadError(f"{path}: missing required MED columns in header")
    pairs: list[NLIPair] = []
    for row_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split("\t")
        label_str = cols[i_l].strip().lower()
        if label_str not in _MED_LABELS:
            raise DatasetLoadError(f"{path} row {row_no}: unknown label {cols[i_l]!r}")
        genre = cols[i_genre].lower()
        if "upward" in genre:
            mono = "upward"
        elif "downward" in genre:
            mono = "downward"
        else:
            mono = "none"
        pairs.append(
            NLIPair(
                pair_id=cols[i_id].strip(),
                premise=cols[i_a].strip(),
                hypothesis=cols[i_b].strip(),
                gold=_MED_LABELS[label_str],
                monotonicity=mono,
            )
        )
    return pairs


@dataclass
class MetricsReport:
    accuracy: float
    precision: dict[str, float]
    recall: dict[str, float]
    macro_precision: float
    macro_recall: float
    confusion: dict[str, dict[str, int]]      # gold -> predicted -> count
    total: int
    med_breakdown: dict[str, float] | None
    records: list[dict] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "confusion": self.confusion,
            "total": self.total,
            "med_breakdown": self.med_breakdown,
            "records": self.records,
            "config": self.config,
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    def summary(self) -> str:
        lines = [
            f"pairs: {self.total}",
            f"accuracy: {self.accuracy:.4f}",
            f"macro P/R: {self.macro_precision:.4f} / {self.macro_recall:.4f}",
            "per-class P/R:",
        ]
        for name in sorted(self.precision):
            lines.append(f"  {name:<10} P={self.precision[name]:.4f} R={self.recall[name]:.4f}")
        lines.append("confusion (gold -> predicted):")
        names = [l.value for l in LABELS]
        lines.append("  " + " ".join(f"{n:>10}" for n in [""] + names))
        for g in names:
            row = [f"{self.confusion[g][p]:>10}" for p in names]
            lines.append(f"  {g:>10} " + " ".join(row))
        if self.med_breakdown is not None:
            lines.append("monotonicity breakdown (accuracy):")
            for k in ("upward", "downward", "all"):
                if k in self.med_breakdown:
                    lines.append(f"  {k:<10} {self.med_breakdown[k]:.4f}")
        return "\n".join(lines)


def _metrics_from_counts(
    confusion: dict[str, dict[str, int]], total: int
) -> tuple[float, dict[str, float], dict[str, float]]:
    names = [l.value for l in LABELS]
    correct = sum(confusion[n][n] for n in names)
    accuracy = correct / total if total else 0.0
    precision: dict[str, float] = {}
    recall: dict[str, float] = {}
    for n in names:
        pred_n = sum(confusion[g][n] for g in names)
        gold_n = sum(confusion[n][p] for p in names)
        precision[n] = confusion[n][n] / pred_n if pred_n else 0.0
        recall[n] = confusion[n][n] / gold_n if gold_n else 0.0
    return accuracy, precision, recall


def _pair_parses(pair: NLIPair, parses_dir: Path | None, scorer) -> tuple:
    if pair.premise_conllu and pair.hypothesis_conllu:
        blocks = parse_conllu(pair.premise_conllu) + parse_conllu(pair.hypothesis_conllu)
    elif parses_dir is not None:
        text = (parses_dir / f"{pair.pair_id}.conllu").read_text(encoding="utf-8")
        blocks = parse_conllu(text)
    elif hasattr(scorer, "parse"):
        blocks = parse_conllu("\n".join(scorer.parse([pair.premise, pair.hypothesis])))
    else:
        raise DatasetLoadError(f"pair {pair.pair_id}: no parse source available")
    if len(blocks) < 2:
        raise DatasetLoadError(f"pair {pair.pair_id}: expected premise+hypothesis parses")
    return blocks[0].tokens, blocks[1].tokens


def evaluate(
    pairs: list[NLIPair],
    cfg: SearchConfig,
    ctx: EngineContext,
    parses_dir: str | Path | None = None,
    workers: int = 1,
    config_note: dict | None = None,
) -> MetricsReport:
    """Classify every pair and aggregate metrics.

    Unparseable pairs are counted as NEUTRAL predictions and flagged in the
    report rather than aborting the run.  With the offline scorer the report
    is byte-for-byte deterministic.
    """
    pdir = Path(parses_dir) if parses_dir is not None else None

    def run_one(pair: NLIPair) -> tuple[NLIPair, InferenceResult, bool]:
        try:
            prem, hyp = _pair_parses(pair, pdir, ctx.scorer)
            return pair, classify(prem, hyp, cfg, ctx), False
        except Exception:
            return pair, InferenceResult(label=Label.NEUTRAL), True

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, pairs))
    else:
        results = [run_one(p) for p in pairs]

    names = [l.value for l in LABELS]
    confusion = {g: {p: 0 for p in names} for g in names}
    records = []
    mono_counts: dict[str, list[int]] = {"upward": [0, 0], "downward": [0, 0], "none": [0, 0]}
    two_way = all(p.monotonicity is not None for p in pairs) and bool(pairs)

    for pair, result, failed in results:
        predicted = result.label
        if two_way and predicted is Label.CONTRADICT:
            predicted = Label.NEUTRAL  # two-way benchmark: contradiction counts as non-entailment
        confusion[pair.gold.value][predicted.value] += 1
        correct = predicted is pair.gold
        if pair.monotonicity is not None:
            mono_counts[pair.monotonicity][0] += int(correct)
            mono_counts[pair.monotonicity][1] += 1
        records.append(
            {
                "id": pair.pair_id,
                "gold": pair.gold.value,
                "predicted": predicted.value,
                "correct": correct,
                "parse_failed": failed,
                "trace": [
                    {"kind": e.kind.value, "site": list(e.site), "replacement": e.replacement}
                    for e in result.trace
                ],
                "warnings": list(result.warnings),
            }
        )

    total = len(pairs)
    accuracy, precision, recall = _metrics_from_counts(confusion, total)
    med_breakdown = None
    if two_way:
        med_breakdown = {}
        for k in ("upward", "downward", "none"):
            good, n = mono_counts[k]
            if n:
                med_breakdown[k] = good / n
        med_breakdown["all"] = accuracy
    return MetricsReport(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        macro_precision=sum(precision.values()) / len(precision),
        macro_recall=sum(recall.values()) / len(recall),
        confusion=confusion,
        total=total,
        med_breakdown=med_breakdown,
        records=records,
        config=dict(config_note or {}),
    )
