"""Batch bridge between a generated suite and an external MT backend.

Two backends share one wire contract: each request is a block of
``id<TAB>source_text`` lines and each reply is a block of
``id<TAB>translation`` lines. Replies are paired by id, never by line order.
The command backend spawns the configured shell command once per batch; the
HTTP backend POSTs the block as UTF-8 ``text/plain`` and reads the same shape
back. Partial progress can be persisted so an interrupted run resumes with
only the missing ids.
"""

from __future__ import annotations

import json
import os
import random
import subprocess
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import BackendUnavailable, IncompleteBatch, ProtocolViolation
from .formats import TranslationRecord, parse_translations
from .lexicon import Language
from .suite import TestInstance


class AdapterKind(Enum):
    EXTERNAL_COMMAND = "cmd"
    HTTP_ENDPOINT = "http"


@dataclass(frozen=True)
class AdapterConfig:
    kind: AdapterKind
    target: str
    language: Language
    system_id: str
    batch_size: int = 32
    timeout: float = 60.0
    max_retries: int = 2
    max_concurrent_batches: int = 1

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.max_concurrent_batches < 1:
            raise ValueError("max_concurrent_batches must be >= 1")

    @classmethod
    def parse_target(cls, spec: str, language: Language, system_id: str, **kwargs) -> "AdapterConfig":
        """Build a config from a CLI spec: cmd:"<command>" or http:<url>."""
        if spec.startswith("cmd:"):
            return cls(AdapterKind.EXTERNAL_COMMAND, spec[4:], language, system_id, **kwargs)
        if spec.startswith(("http://", "https://")):
            return cls(AdapterKind.HTTP_ENDPOINT, spec, language, system_id, **kwargs)
        if spec.startswith("http:"):
            return cls(AdapterKind.HTTP_ENDPOINT, spec[5:], language, system_id, **kwargs)
        raise ValueError(f"adapter spec must start with cmd: or http:, got {spec!r}")


def _encode_batch(batch: Sequence[TestInstance]) -> str:
    lines = []
    for instance in batch:
        if "\n" in instance.source_text or "\t" in instance.id:
            raise ProtocolViolation(f"instance {instance.id!r} cannot be framed on the line protocol")
        lines.append(f"{instance.id}\t{instance.source_text}")
    return "\n".join(lines) + "\n"


def _decode_reply(reply: str, batch_ids: set[str]) -> dict[str, str]:
    translations: dict[str, str] = {}
    for line in reply.splitlines():
        if not line.strip():
            continue
        if "\t" not in line:
            raise ProtocolViolation(f"reply line without tab separator: {line[:80]!r}")
        instance_id, text = line.split("\t", 1)
        if instance_id not in batch_ids:
            raise ProtocolViolation(f"reply id {instance_id!r} was not part of the batch")
        translations[instance_id] = text
    return translations


def _run_command(command: str, payload: str, timeout: float) -> str:
    try:
        process = subprocess.run(
            command,
            shell=True,
            input=payload.encode("utf-8"),
            capture_output=True,
            timeout=timeout,
        )
    except subprocess.TimeoutExpired as exc:
        raise BackendUnavailable(f"command timed out after {timeout}s") from exc
    if process.returncode != 0:
        stderr = process.stderr.decode("utf-8", "replace").strip()
        raise BackendUnavailable(f"command exited with {process.returncode}: {stderr[:200]}")
    return process.stdout.decode("utf-8")


def _run_http(url: str, payload: str, timeout: float) -> str:
    headers = {"Content-Type": "text/plain; charset=utf-8"}
    token = os.environ.get("GNT_HTTP_TOKEN")
    if token:
        headers["Authorization"] = f"Bearer {token}"
    request = urllib.request.Request(url, data=payload.encode("utf-8"), headers=headers, method="POST")
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            return response.read().decode("utf-8")
    except urllib.error.HTTPError as exc:
        raise BackendUnavailable(f"HTTP {exc.code} from backend: {exc.reason}") from exc
    except (urllib.error.URLError, TimeoutError, OSError) as exc:
        raise BackendUnavailable(f"backend unreachable: {exc}") from exc


def _call_backend(config: AdapterConfig, payload: str) -> str:
    if config.kind is AdapterKind.EXTERNAL_COMMAND:
        return _run_command(config.target, payload, config.timeout)
    return _run_http(config.target, payload, config.timeout)


def _with_retries(config: AdapterConfig, payload: str, sleep: Callable[[float], None], rng: random.Random) -> str:
    # exponential backoff with jitter, capped by max_retries
    last: Exception | None = None
    for attempt in range(config.max_retries + 1):
        try:
            return _call_backend(config, payload)
        except BackendUnavailable as exc:
            last = exc
            if attempt < config.max_retries:
                sleep(min(30.0, 0.5 * 2**attempt) * (0.5 + rng.random() / 2))
    assert last is not None
    raise last


def translate_suite(
    suite: Iterable[TestInstance],
    config: AdapterConfig,
    resume_path: str | Path | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> list[TranslationRecord]:
    """Collect one TranslationRecord per instance from the configured backend.

    When `resume_path` is given, completed records are appended there after
    every batch and a rerun only requests the ids still missing. Raises
    IncompleteBatch when a reply skips ids, ProtocolViolation on malformed or
    foreign reply lines, and BackendUnavailable once retries are exhausted.
    """
    instances = list(suite)
    done: dict[str, TranslationRecord] = {}
    resume = Path(resume_path) if resume_path else None
    if resume and resume.exists():
        for record in parse_translations(resume):
            if record.system_id == config.system_id and record.language is config.language:
                done[record.instance_id] = record

    pending = [instance for instance in instances if instance.id not in done]
    rng = random.Random()
    persist_lock = threading.Lock()

    def handle_batch(batch: list[TestInstance]) -> tuple[list[TranslationRecord], list[str]]:
        payload = _encode_batch(batch)
        reply = _with_retries(config, payload, sleep, rng)
        translations = _decode_reply(reply, {instance.id for instance in batch})
        records = [
            TranslationRecord(config.system_id, config.language, instance.id, translations[instance.id])
            for instance in batch
            if instance.id in translations
        ]
        missing = [instance.id for instance in batch if instance.id not in translations]
        # persist before any later batch gets the chance to fail the run
        if resume and records:
            with persist_lock:
                _append_records(resume, records)
        return records, missing

    batches = [pending[i : i + config.batch_size] for i in range(0, len(pending), config.batch_size)]
    if config.max_concurrent_batches > 1 and len(batches) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=config.max_concurrent_batches) as pool:
            outcomes = list(pool.map(handle_batch, batches))
    else:
        outcomes = [handle_batch(batch) for batch in batches]

    failures: list[str] = []
    for records, missing in outcomes:
        failures.extend(missing)
        done.update({record.instance_id: record for record in records})
    if failures:
        raise IncompleteBatch(sorted(failures))
    return sorted(done.values(), key=lambda record: record.instance_id)


def _append_records(path: Path, records: list[TranslationRecord]) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for record in records:
            fh.write(
                json.dumps(
                    {
                        "system": record.system_id,
                        "lang": record.language.value,
                        "id": record.instance_id,
                        "text": record.target_text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
