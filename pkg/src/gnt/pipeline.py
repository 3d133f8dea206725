"""End-to-end composition: generate -> score -> metrics -> report.

Systems and languages are discovered from the translations file, so scoring a
new system is purely a data change. Every stage failure is re-raised as a
PipelineStageError naming the stage.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .classify import SlotScore, classify_instance
from .errors import EmptySelection, GntError, PipelineStageError
from .formats import (
    TranslationRecord,
    parse_translations,
    split_orphans,
    write_metrics_doc,
    write_scores,
    write_suite,
)
from .lexicon import Language, LanguageResources, load_language_resources
from .metrics import (
    DEFAULT_SIGNIFICANCE_THRESHOLD,
    ResponseReport,
    StrategyBreakdown,
    aggregate,
    compute_stereotype_effect,
    flag_significance,
    macro_average,
    macro_average_breakdowns,
    paired_response,
)
from .report import render_report
from .suite import (
    AmbiguityKind,
    SuiteManifest,
    TemplateFamily,
    TestInstance,
    StereotypeKind,
    generate_suite,
    quota_key_for_slot,
)

_BASELINE_FAMILIES = (
    TemplateFamily.T1_ONE_PERSON_KNOWN,
    TemplateFamily.T2_TWO_PERSON_KNOWN,
    TemplateFamily.T3_ONE_PERSON_PARTIAL,
    TemplateFamily.T4_TWO_PERSON_PARTIAL,
    TemplateFamily.T5_CHAR_STEREOTYPE,
)
_OMISSION_FAMILIES = (TemplateFamily.T3_ONE_PERSON_PARTIAL, TemplateFamily.T4_TWO_PERSON_PARTIAL)


def _number(value):
    if value is None:
        return None
    if isinstance(value, Fraction):
        return float(value)
    return float(value)


def breakdown_to_json(breakdown: StrategyBreakdown) -> dict:
    return {
        "m": _number(breakdown.m),
        "f": _number(breakdown.f),
        "n": _number(breakdown.n),
        "n1": _number(breakdown.n1),
        "n2": _number(breakdown.n2),
        "n3": _number(breakdown.n3),
        "n4": _number(breakdown.n4),
        "n5": _number(breakdown.n5),
        "u": _number(breakdown.u),
        "count": breakdown.count,
        "u_count": breakdown.u_count,
    }


def response_to_json(report: ResponseReport) -> dict:
    return {
        "det": breakdown_to_json(report.det),
        "amb": breakdown_to_json(report.amb),
        "delta_m": _number(report.delta_m),
        "delta_f": _number(report.delta_f),
        "delta_n": _number(report.delta_n),
        "delta_ni": [_number(v) for v in report.delta_ni] if report.delta_ni is not None else None,
        "significant_m": report.significant_m,
        "significant_n": report.significant_n,
    }


def score_suite(
    suite: list[TestInstance],
    translations: list[TranslationRecord],
    resources: LanguageResources,
) -> tuple[list[SlotScore], int]:
    """Classify every translated instance; returns (scores, missing count)."""
    by_id = {record.instance_id: record for record in translations}
    scores: list[SlotScore] = []
    missing = 0
    for instance in suite:
        record = by_id.get(instance.id)
        if record is None:
            missing += 1
            continue
        scores.extend(classify_instance(instance, record.target_text, resources))
    return scores, missing


def _response_section(suite_index, scores, families, amb_kind, threshold):
    per_family: dict[str, dict] = {}
    reports: dict[str, ResponseReport] = {}
    for family in families:
        try:
            det = aggregate(scores, suite_index, lambda fam, g, s, f=family: fam is f and not g.is_ambiguous)
            amb = aggregate(
                scores, suite_index, lambda fam, g, s, f=family: fam is f and g.ambiguity is amb_kind
            )
            report = paired_response(det, amb, threshold)
        except EmptySelection:
            continue
        reports[family.tag] = report
        per_family[family.tag] = response_to_json(report)
    if not reports:
        return None
    macro = macro_average(reports)
    return {
        "families": sorted(per_family),
        "per_family": per_family,
        "macro": response_to_json(macro),
    }


def build_metrics_doc(
    suite: list[TestInstance],
    scores: list[SlotScore],
    system: str,
    language: Language,
    threshold: float = DEFAULT_SIGNIFICANCE_THRESHOLD,
    orphan_translations: int = 0,
    missing_translations: int = 0,
) -> dict:
    """Aggregate one system/language score set into the metrics document."""
    suite_index = {instance.id: instance for instance in suite}

    baseline = None
    per_family_breakdowns: dict[str, StrategyBreakdown] = {}
    for family in _BASELINE_FAMILIES:
        try:
            breakdown = aggregate(
                scores, suite_index, lambda fam, g, s, f=family: fam is f and not g.is_ambiguous
            )
        except EmptySelection:
            continue
        if not breakdown.is_empty:
            per_family_breakdowns[family.tag] = breakdown
    if per_family_breakdowns:
        macro = macro_average_breakdowns(per_family_breakdowns)
        baseline = {
            "families": sorted(per_family_breakdowns),
            "per_family": {tag: breakdown_to_json(b) for tag, b in per_family_breakdowns.items()},
            "macro": breakdown_to_json(macro),
        }

    strategy_breakdown = None
    if baseline:
        def _by_type(cell: dict) -> dict:
            return {"n_det": cell["n"], "n1": cell["n1"], "n2": cell["n2"],
                    "n3": cell["n3"], "n4": cell["n4"], "n5": cell["n5"]}

        strategy_breakdown = {
            "families": baseline["families"],
            "per_family": {tag: _by_type(cell) for tag, cell in baseline["per_family"].items()},
            "macro": _by_type(baseline["macro"]),
        }

    omission = _response_section(suite_index, scores, _OMISSION_FAMILIES, AmbiguityKind.OMISSION, threshold)
    active = _response_section(
        suite_index, scores, (TemplateFamily.T5_CHAR_STEREOTYPE,), AmbiguityKind.ACTIVE, threshold
    )

    stereotype = None
    try:
        t7 = TemplateFamily.T7_ADVERB_STEREOTYPE
        neutral = aggregate(scores, suite_index, lambda fam, g, s: fam is t7 and s.kind is StereotypeKind.NONE)
        stereo_m = aggregate(
            scores, suite_index, lambda fam, g, s: fam is t7 and s.kind is StereotypeKind.MASCULINE
        )
        stereo_f = aggregate(
            scores, suite_index, lambda fam, g, s: fam is t7 and s.kind is StereotypeKind.FEMININE
        )
        effect = compute_stereotype_effect(neutral, stereo_m, stereo_f)
        stereotype = {
            "neutral": breakdown_to_json(effect.neutral),
            "stereo_m": breakdown_to_json(effect.stereo_m),
            "stereo_f": breakdown_to_json(effect.stereo_f),
            "delta_g_avg": _number(effect.delta_g_avg),
            "delta_n_avg": _number(effect.delta_n_avg),
            "significant_g": flag_significance(effect.delta_g_avg, threshold),
        }
    except EmptySelection:
        pass

    subsets: dict[str, dict] = {}
    for score in scores:
        instance = suite_index[score.instance_id]
        slot = instance.slots[score.slot_index]
        key = quota_key_for_slot(instance.family, slot)
        cell = subsets.setdefault(key, {"classified": 0, "unmatched": 0})
        cell["unmatched" if score.label.value == "U" else "classified"] += 1
    for cell in subsets.values():
        total = cell["classified"] + cell["unmatched"]
        cell["unmatched_rate"] = cell["unmatched"] / total if total else 0.0

    return {
        "system": system,
        "lang": language.value,
        "threshold": threshold,
        "baseline": baseline,
        "omission_response": omission,
        "active_response": active,
        "strategy_breakdown": strategy_breakdown,
        "stereotype": stereotype,
        "coverage": {
            "subsets": dict(sorted(subsets.items())),
            "orphan_translations": orphan_translations,
            "missing_translations": missing_translations,
        },
    }


@dataclass
class ReportDocument:
    system_id: str
    language: Language
    doc: dict
    markdown: str
    scores_path: Path | None = None
    metrics_path: Path | None = None
    report_path: Path | None = None


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text) or "unnamed"


def _stage(name: str, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except PipelineStageError:
        raise
    except (GntError, OSError) as exc:
        raise PipelineStageError(name, exc) from exc


def run_pipeline(
    manifest: SuiteManifest,
    translations_path: str | Path,
    lexicon_dir: str | Path,
    out_dir: str | Path,
    threshold: float = DEFAULT_SIGNIFICANCE_THRESHOLD,
    seed: int | None = None,
) -> list[ReportDocument]:
    """Generate the suite, score every (system, language) found, and report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    suite = _stage("generate", generate_suite, manifest, seed)
    _stage("generate", write_suite, suite, out / "suite.jsonl")
    records = _stage("parse", parse_translations, translations_path)

    known_ids = {instance.id for instance in suite}
    groups: dict[tuple[str, Language], list[TranslationRecord]] = {}
    for record in records:
        groups.setdefault((record.system_id, record.language), []).append(record)

    documents = []
    for (system, language), group in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        valid, orphans = split_orphans(group, known_ids)

        def _score():
            resources = load_language_resources(lexicon_dir, language)
            return score_suite(suite, valid, resources)

        scores, missing = _stage("score", _score)
        doc = _stage(
            "metrics",
            build_metrics_doc,
            suite,
            scores,
            system,
            language,
            threshold,
            orphan_translations=len(orphans),
            missing_translations=missing,
        )
        markdown = _stage("report", render_report, doc, "markdown")

        stem = f"{_slug(system)}_{language.value}"
        scores_path = out / f"scores_{stem}.jsonl"
        metrics_path = out / f"metrics_{stem}.json"
        report_path = out / f"report_{stem}.md"
        _stage("report", write_scores, scores, scores_path)
        _stage("report", write_metrics_doc, doc, metrics_path)
        _stage("report", report_path.write_text, markdown, encoding="utf-8")

        documents.append(
            ReportDocument(system, language, doc, markdown, scores_path, metrics_path, report_path)
        )
    return documents
