"""Command-line orchestration of the simplification workflow.

Configuration layers: command-line flags win over environment variables,
which win over the key=value config file. Every command that writes
artifacts also writes a manifest (input hashes, config hash, prompt
template hashes, seed) beside them; manifests carry no timestamps so a
rerun with identical inputs is byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .metrics import (
    aggregate_report,
    bertscore,
    dsari,
    markdown_tables,
    per_doc_csv,
    readability,
    semantic_similarity,
    system_csv,
)
from .review import (
    ROUND1_STATEMENTS,
    ROUND2_STATEMENTS,
    ReviewStore,
    Task,
    create_app,
)
from .simplifier import (
    ChatClient,
    build_round2_request,
    execute_round2,
    lint_fidelity,
    load_versions,
    save_versions,
    simplify_records,
    version_from_json_line,
    version_to_json_line,
)
from .simplifier.client import HashEmbeddingProvider, HttpEmbeddingProvider
from .simplifier.prompts import available_prompts, load_prompt
from .termkb import LexiconMatcher, NerClient, TermKb, explain_terms, load_lexicon
from .textproc import tokenize

CONFIG_ENV_MAP = {
    "llm_base_url": "ATS_LLM_BASE_URL",
    "llm_model": "ATS_LLM_MODEL",
    "llm_api_key": "ATS_LLM_API_KEY",
    "embed_base_url": "ATS_EMBED_BASE_URL",
    "embed_model": "ATS_EMBED_MODEL",
    "embed_api_key": "ATS_EMBED_API_KEY",
    "ner_base_url": "ATS_NER_BASE_URL",
}

METRIC_CHOICES = ("dsari", "bertscore", "semsim", "fkgl", "ne")


class ConfigError(Exception):
    pass


def load_config_file(path: str | None) -> dict[str, str]:
    """key = value lines; # starts a comment; unknown keys are kept."""
    if not path:
        return {}
    cfg = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


def resolve_config(config_path: str | None) -> dict[str, str]:
    cfg = load_config_file(config_path)
    for key, env_name in CONFIG_ENV_MAP.items():
        value = os.environ.get(env_name)
        if value:
            cfg[key] = value
    return cfg


def _chat_client(cfg: dict[str, str], args) -> ChatClient:
    base_url = cfg.get("llm_base_url")
    model_id = cfg.get("llm_model")
    if not base_url or not model_id:
        raise ConfigError(
            "chat endpoint not configured (set ATS_LLM_BASE_URL and ATS_LLM_MODEL, "
            "or llm_base_url/llm_model in the config file)"
        )
    return ChatClient(
        base_url=base_url,
        model_id=model_id,
        temperature=getattr(args, "temperature", 0.0),
        request_timeout=float(cfg.get("request_timeout", 60.0)),
        max_parallel=getattr(args, "parallel", 1),
        api_key=cfg.get("llm_api_key", ""),
        backoff_start=float(cfg.get("retry_backoff", 1.0)),
    )


def _embedding_provider(cfg: dict[str, str], args):
    kind = getattr(args, "embedding", "hash")
    if kind == "hash":
        return HashEmbeddingProvider(seed=getattr(args, "seed", 0) or 0)
    base_url = cfg.get("embed_base_url")
    model_id = cfg.get("embed_model")
    if not base_url or not model_id:
        raise ConfigError(
            "embedding endpoint not configured (set ATS_EMBED_BASE_URL and ATS_EMBED_MODEL)"
        )
    return HttpEmbeddingProvider(base_url, model_id, 0, api_key=cfg.get("embed_api_key", ""))


# -- manifests ---------------------------------------------------------------


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(
    manifest_path: Path,
    command: str,
    inputs: list[Path],
    config: dict,
    outputs: list[Path],
    include_prompts: bool = False,
) -> None:
    manifest = {
        "command": command,
        "config": config,
        "config_hash": hashlib.sha256(
            json.dumps(config, sort_keys=True).encode("utf-8")
        ).hexdigest(),
        "inputs": {str(p): _sha256_file(Path(p)) for p in inputs},
        "outputs": sorted(str(p) for p in outputs),
    }
    if include_prompts:
        manifest["prompt_templates"] = {
            pid: hashlib.sha256(load_prompt(pid).encode("utf-8")).hexdigest()
            for pid in available_prompts()
        }
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


# -- subcommand handlers ------------------------------------------------------


def cmd_ingest(args) -> int:
    paths = []
    for raw in args.input:
        p = Path(raw)
        if p.is_dir():
            paths.extend(sorted(p.rglob("*.json")))
        else:
            paths.append(p)
    records = []
    seen_ids = set()
    skipped = 0
    for path in paths:
        try:
            rec = corpus_mod.parse_cve_record(path.read_text(encoding="utf-8"), str(path))
        except (
            corpus_mod.MalformedDocument,
            corpus_mod.MissingId,
            corpus_mod.NoEnglishDescription,
        ) as exc:
            print(f"skipping {path}: {exc}", file=sys.stderr)
            skipped += 1
            continue
        if rec.id in seen_ids:
            print(f"skipping {path}: duplicate id {rec.id}", file=sys.stderr)
            skipped += 1
            continue
        seen_ids.add(rec.id)
        records.append(rec)
    if not records:
        print("error: no records ingested", file=sys.stderr)
        return 1
    out = Path(args.output)
    corpus_mod.save_corpus(corpus_mod.Corpus(records=records), out)
    write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "ingest",
        paths,
        {"skipped": skipped, "ingested": len(records)},
        [out],
    )
    print(f"ingested {len(records)} records ({skipped} skipped) -> {out}")
    return 0


def cmd_clean(args) -> int:
    corpus = corpus_mod.load_corpus(args.corpus)
    overrides = corpus_mod.load_overrides(args.overrides) if args.overrides else None
    cleaned = [corpus_mod.clean_description(rec, overrides) for rec in corpus.records]
    out = Path(args.output)
    corpus_mod.save_corpus(corpus_mod.Corpus(records=cleaned, seed=corpus.seed), out)
    inputs = [Path(args.corpus)] + ([Path(args.overrides)] if args.overrides else [])
    removed = sum(len(r.removed_spans) for r in cleaned)
    write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "clean",
        inputs,
        {"overrides": bool(args.overrides), "removed_spans": removed},
        [out],
    )
    print(f"cleaned {len(cleaned)} records, {removed} spans removed -> {out}")
    return 0


def cmd_sample(args) -> int:
    corpus = corpus_mod.load_corpus(args.corpus)
    sampled = corpus_mod.partition_corpus(corpus, args.eval_n, args.dev_n, args.seed)
    out = Path(args.output)
    corpus_mod.save_corpus(sampled, out)
    write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "sample",
        [Path(args.corpus)],
        {"eval_n": args.eval_n, "dev_n": args.dev_n, "seed": args.seed},
        [out],
    )
    print(f"sampled eval={args.eval_n} dev={args.dev_n} seed={args.seed} -> {out}")
    return 0


def _select_records(corpus, split: str):
    if split == "all":
        return list(corpus.records)
    return [r for r in corpus.records if r.split == split]


def cmd_simplify(args) -> int:
    cfg = resolve_config(args.config)
    client = _chat_client(cfg, args)
    out = Path(args.output)

    if args.round >= 2:
        if not args.requests:
            raise ConfigError("--round 2 requires --requests (see `round2 build`)")
        versions = []
        with open(args.requests, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                v1 = version_from_json_line(json.dumps(row["v1"]))
                versions.append(execute_round2(v1, row["messages"], client))
        save_versions(versions, out)
        write_manifest(
            out.with_suffix(out.suffix + ".manifest.json"),
            "simplify",
            [Path(args.requests)],
            {"round": args.round, "model": client.model_id},
            [out],
            include_prompts=True,
        )
        print(f"resimplified {len(versions)} docs (round {args.round}) -> {out}")
        return 0

    corpus = corpus_mod.load_corpus(args.corpus)
    records = _select_records(corpus, args.split)
    if not records:
        print(f"error: no records in split {args.split!r}", file=sys.stderr)
        return 1
    kb = None
    if args.mode == "agent":
        if not args.lexicon:
            raise ConfigError("agent mode requires --lexicon")
        ner = None
        if args.strategy in ("ner", "union"):
            ner_url = cfg.get("ner_base_url")
            if not ner_url:
                raise ConfigError(f"strategy {args.strategy!r} requires ATS_NER_BASE_URL")
            ner = NerClient(ner_url)
        kb = TermKb(load_lexicon(args.lexicon), ner=ner)
    versions = simplify_records(
        records,
        client,
        mode=args.mode,
        kb=kb,
        strategy=args.strategy,
        audit_dir=args.audit_dir,
    )
    save_versions(versions, out)
    inputs = [Path(args.corpus)] + ([Path(args.lexicon)] if args.lexicon else [])
    write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "simplify",
        inputs,
        {
            "mode": args.mode,
            "round": args.round,
            "split": args.split,
            "strategy": args.strategy,
            "model": client.model_id,
        },
        [out],
        include_prompts=True,
    )
    print(f"simplified {len(versions)} docs (mode {args.mode}) -> {out}")
    return 0


def cmd_explain(args) -> int:
    cfg = resolve_config(args.config)
    client = _chat_client(cfg, args)
    corpus = corpus_mod.load_corpus(args.corpus)
    records = _select_records(corpus, args.split)
    ner = None
    if args.strategy in ("ner", "union"):
        ner_url = cfg.get("ner_base_url")
        if not ner_url:
            raise ConfigError(f"strategy {args.strategy!r} requires ATS_NER_BASE_URL")
        ner = NerClient(ner_url)
    kb = TermKb(load_lexicon(args.lexicon), ner=ner)

    from .simplifier.client import _ChatCallable

    out = Path(args.output)
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        for rec in records:
            mentions = kb.extract(rec.cleaned_description, strategy=args.strategy)
            explanations = explain_terms(mentions, kb.index, _ChatCallable(client), k=args.k)
            row = {
                "cve_id": rec.id,
                "terms": [
                    {
                        "term": e.term,
                        "explanation": e.explanation,
                        "explained": e.explained,
                        "error": e.error,
                        "evidence_terms": [entry.term for entry in e.evidence],
                    }
                    for e in explanations
                ],
            }
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
    write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "explain",
        [Path(args.corpus), Path(args.lexicon)],
        {"strategy": args.strategy, "k": args.k, "split": args.split},
        [out],
    )
    print(f"explained terms for {len(records)} docs -> {out}")
    return 0


def _load_reference_map(path: str) -> dict[str, str]:
    refs = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            refs[obj.get("cve_id") or obj["id"]] = obj["text"]
    return refs


def cmd_evaluate(args) -> int:
    cfg = resolve_config(args.config)
    corpus = corpus_mod.load_corpus(args.corpus)
    originals = {r.id: r.cleaned_description for r in corpus.records}

    if args.versions:
        versions = load_versions(args.versions)
        targets = [(v.cve_id, v.text) for v in versions]
        default_label = Path(args.versions).stem
    else:
        records = _select_records(corpus, args.split)
        targets = [(r.id, r.cleaned_description) for r in records]
        default_label = "original"
    label = args.label or default_label
    if not targets:
        print("error: nothing to evaluate", file=sys.stderr)
        return 1

    selected = list(METRIC_CHOICES) if args.metrics == "all" else args.metrics.split(",")
    for name in selected:
        if name not in METRIC_CHOICES:
            raise ConfigError(f"unknown metric {name!r} (choices: {', '.join(METRIC_CHOICES)})")
    references = _load_reference_map(args.references) if args.references else None
    if "dsari" in selected and references is None:
        if args.metrics == "all":
            selected.remove("dsari")
        else:
            raise ConfigError("dsari requires --references")
    matcher = None
    if "ne" in selected:
        if args.lexicon:
            matcher = LexiconMatcher(load_lexicon(args.lexicon))
        elif args.metrics == "all":
            selected.remove("ne")
        else:
            raise ConfigError("ne requires --lexicon")
    provider = None
    if "bertscore" in selected or "semsim" in selected:
        provider = _embedding_provider(cfg, args)

    rows = []
    for cve_id, text in targets:
        original = originals.get(cve_id)
        if original is None:
            print(f"error: {cve_id} not in corpus", file=sys.stderr)
            return 1
        row: dict = {"id": cve_id}
        if "dsari" in selected:
            ref = references.get(cve_id)
            if ref is None:
                print(f"error: no reference for {cve_id}", file=sys.stderr)
                return 1
            res = dsari(original, text, ref)
            row.update(
                d_sari=res.d_sari,
                d_keep=res.d_keep,
                d_add=res.d_add,
                d_del=res.d_del,
                f_keep=res.breakdown.f_keep,
                f_add=res.breakdown.f_add,
                p_del=res.breakdown.p_del,
                lp=res.lp,
                slp=res.slp,
            )
        if "bertscore" in selected:
            result = bertscore(
                tokenize(text).non_punct(), tokenize(original).non_punct(), provider
            )
            row.update(
                bertscore_precision=result.precision,
                bertscore_recall=result.recall,
                bertscore_f1=result.f1,
            )
        if "semsim" in selected:
            row["semantic_similarity"] = semantic_similarity(text, original, provider)
        if "fkgl" in selected:
            stats = readability(text)
            row.update(
                fkgl=stats.fkgl,
                words=stats.word_count,
                sentences=stats.sentence_count,
                syllables_per_word=stats.asw,
            )
        if "ne" in selected:
            row["named_entities"] = len(matcher.find(text))
        rows.append(row)

    report = aggregate_report(rows)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    per_doc_path = out_dir / f"{label}_per_doc.csv"
    with open(per_doc_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(per_doc_csv(report))
    summary_path = out_dir / f"{label}_summary.json"
    with open(summary_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump({"label": label, "count": len(rows), "means": report.means}, f, indent=2, sort_keys=True)
        f.write("\n")
    inputs = [Path(args.corpus)]
    for extra in (args.versions, args.references, args.lexicon):
        if extra:
            inputs.append(Path(extra))
    write_manifest(
        out_dir / f"{label}_manifest.json",
        "evaluate",
        inputs,
        {
            "label": label,
            "metrics": sorted(selected),
            "embedding": args.embedding,
            "seed": args.seed,
            "split": args.split,
        },
        [per_doc_path, summary_path],
    )
    means_text = ", ".join(f"{k}={v:.4f}" for k, v in report.means.items())
    print(f"evaluated {len(rows)} docs [{label}]: {means_text}")
    print(f"wrote {per_doc_path} and {summary_path}")
    return 0


def cmd_lint(args) -> int:
    corpus = corpus_mod.load_corpus(args.corpus)
    originals = {r.id: r.cleaned_description for r in corpus.records}
    versions = load_versions(args.versions)
    out = Path(args.output)
    total = 0
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        for v in versions:
            original = originals.get(v.cve_id)
            if original is None:
                print(f"error: {v.cve_id} not in corpus", file=sys.stderr)
                return 1
            for finding in lint_fidelity(original, v.text):
                total += 1
                f.write(
                    json.dumps(
                        {
                            "cve_id": v.cve_id,
                            "kind": finding.kind,
                            "original_token": finding.original_token,
                            "found_token": finding.found_token,
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )
    write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "lint",
        [Path(args.corpus), Path(args.versions)],
        {"findings": total},
        [out],
    )
    print(f"lint: {total} findings over {len(versions)} versions -> {out}")
    return 0


def cmd_report(args) -> int:
    summaries = {}
    for path in args.summaries:
        with open(path, encoding="utf-8") as f:
            obj = json.load(f)
        summaries[obj["label"]] = obj["means"]
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "system.csv"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(system_csv(summaries))
    md_path = out_dir / "tables.md"
    with open(md_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(markdown_tables(summaries))
    write_manifest(
        out_dir / "report_manifest.json",
        "report",
        [Path(p) for p in args.summaries],
        {"systems": sorted(summaries)},
        [csv_path, md_path],
    )
    print(f"report over {len(summaries)} systems -> {csv_path}, {md_path}")
    return 0


def _versions_by_id(path: str) -> dict[str, object]:
    return {v.cve_id: v for v in load_versions(path)}


def cmd_survey_create(args) -> int:
    store = ReviewStore(args.log)
    corpus = corpus_mod.load_corpus(args.corpus)
    originals = {r.id: r.cleaned_description for r in corpus.records}
    v1_map = _versions_by_id(args.versions)

    if args.round == 1:
        order = [r.id for r in corpus.records if r.id in v1_map]
        tasks = [Task(c, originals[c], {"v1": v1_map[c].text}) for c in order]
        statements = ROUND1_STATEMENTS
    else:
        prior = store.get_round(args.round - 1)
        if not prior.decisions:
            print(f"error: round {args.round - 1} is not closed yet", file=sys.stderr)
            return 1
        if not args.versions2:
            raise ConfigError("round 2 requires --versions2")
        v2_map = _versions_by_id(args.versions2)
        order = [c for c in prior.task_order if not prior.decisions[c].accepted]
        missing = [c for c in order if c not in v2_map or c not in v1_map]
        if missing:
            print(f"error: missing versions for {', '.join(missing)}", file=sys.stderr)
            return 1
        tasks = [
            Task(c, originals[c], {"v1": v1_map[c].text, "v2": v2_map[c].text}) for c in order
        ]
        statements = ROUND2_STATEMENTS
    state = store.create_round(args.round, tasks, statements)
    print(f"round {args.round} created with {len(state.task_order)} tasks -> {args.log}")
    return 0


def cmd_survey_serve(args) -> int:
    import uvicorn

    store = ReviewStore(args.log)
    app = create_app(store, admin_token=args.admin_token, webui_dir=args.webui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_survey_close(args) -> int:
    store = ReviewStore(args.log)
    decisions = store.close_round(args.round)
    accepted = sum(1 for d in decisions if d.accepted)
    if args.out_dir:
        csv_path = store.export_round(args.round, args.out_dir)
        print(f"exported {csv_path}")
    print(f"round {args.round} closed: {accepted}/{len(decisions)} accepted")
    return 0


def cmd_round2_build(args) -> int:
    store = ReviewStore(args.log)
    prior = store.get_round(1)
    if not prior.decisions:
        print("error: round 1 is not closed yet", file=sys.stderr)
        return 1
    corpus = corpus_mod.load_corpus(args.corpus)
    records = {r.id: r for r in corpus.records}
    v1_map = _versions_by_id(args.versions)
    out = Path(args.output)
    count = 0
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        for cve_id in prior.task_order:
            if prior.decisions[cve_id].accepted:
                continue
            rec = records.get(cve_id)
            v1 = v1_map.get(cve_id)
            if rec is None or v1 is None:
                print(f"error: missing record or version for {cve_id}", file=sys.stderr)
                return 1
            comments = store.comments_for(1, cve_id)
            messages = build_round2_request(rec, v1, comments)
            row = {
                "cve_id": cve_id,
                "messages": messages,
                "v1": json.loads(version_to_json_line(v1)),
            }
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
            count += 1
    write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "round2 build",
        [Path(args.log), Path(args.corpus), Path(args.versions)],
        {"requests": count},
        [out],
        include_prompts=True,
    )
    print(f"built {count} round-2 requests -> {out}")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvesimplify",
        description="CVE description simplification toolkit",
    )
    parser.add_argument("--config", help="key = value config file", default=None)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("ingest", help="parse CVE JSON files into a corpus")
    p.add_argument("--input", nargs="+", required=True, help="JSON files or directories")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("clean", help="strip non-natural-language lines")
    p.add_argument("--corpus", required=True)
    p.add_argument("--overrides", default=None, help="manual span overrides JSONL")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("sample", help="partition into eval/dev splits")
    p.add_argument("--corpus", required=True)
    p.add_argument("--eval-n", type=int, required=True)
    p.add_argument("--dev-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("simplify", help="produce simplification versions")
    p.add_argument("--corpus")
    p.add_argument("--split", default="eval", choices=["eval", "dev", "all"])
    p.add_argument("--mode", default="sentence", choices=["sentence", "document", "agent"])
    p.add_argument("--round", type=int, default=1)
    p.add_argument("--requests", help="round-2 request packages (from `round2 build`)")
    p.add_argument("--lexicon")
    p.add_argument("--strategy", default="lexicon", choices=["lexicon", "ner", "union"])
    p.add_argument("--audit-dir", default=None)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--temperature", type=float, default=0.0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("explain", help="extract and explain terms")
    p.add_argument("--corpus", required=True)
    p.add_argument("--split", default="eval", choices=["eval", "dev", "all"])
    p.add_argument("--lexicon", required=True)
    p.add_argument("--strategy", default="lexicon", choices=["lexicon", "ner", "union"])
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--temperature", type=float, default=0.0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("evaluate", help="compute metrics per document")
    p.add_argument("--corpus", required=True)
    p.add_argument("--split", default="all", choices=["eval", "dev", "all"])
    p.add_argument("--versions", help="simplification store to evaluate (default: originals)")
    p.add_argument("--references", help="reference simplifications JSONL {id, text}")
    p.add_argument("--lexicon", help="lexicon for named-entity counts")
    p.add_argument("--metrics", default="all", help="all or comma list: dsari,bertscore,semsim,fkgl,ne")
    p.add_argument("--embedding", default="hash", choices=["hash", "http"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label", default=None)
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("lint", help="check version/id fidelity of simplifications")
    p.add_argument("--corpus", required=True)
    p.add_argument("--versions", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("report", help="merge evaluation summaries into tables")
    p.add_argument("--summaries", nargs="+", required=True)
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_report)

    survey = sub.add_parser("survey", help="human evaluation rounds")
    survey_sub = survey.add_subparsers(dest="survey_command")

    p = survey_sub.add_parser("create", help="create a survey round")
    p.add_argument("--round", type=int, required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--versions", required=True, help="round-1 versions")
    p.add_argument("--versions2", help="round-2 versions (round 2 only)")
    p.add_argument("--log", required=True, help="event log path")
    p.set_defaults(func=cmd_survey_create)

    p = survey_sub.add_parser("serve", help="serve the review API and webui")
    p.add_argument("--log", required=True)
    p.add_argument("--webui", default=None, help="static webui directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--admin-token", default="")
    p.set_defaults(func=cmd_survey_serve)

    p = survey_sub.add_parser("close", help="close a round and export results")
    p.add_argument("--round", type=int, required=True)
    p.add_argument("--log", required=True)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_survey_close)

    round2 = sub.add_parser("round2", help="round-2 resimplification")
    round2_sub = round2.add_subparsers(dest="round2_command")

    p = round2_sub.add_parser("build", help="build resimplification request packages")
    p.add_argument("--log", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--versions", required=True, help="round-1 versions")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_round2_build)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = getattr(args, "func", None)
    if func is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # surface module errors as one diagnostic line
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
