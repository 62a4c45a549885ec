"""Run manifests: enough provenance to replay a run byte for byte.

Every CLI run writes `manifest.json` next to its outputs.  The manifest
embeds the resolved config text (so the original file is not needed), the
master seed, and a sha256 per output file.  `rerun` parses the embedded
config, executes the command into a fresh directory, and compares hashes.
Wall time and timestamps live only in the manifest, never in outputs, so
replays stay byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    seed: int
    workers: int
    resolved_config: str
    code_version: str
    outputs: list[dict] = field(default_factory=list)  # {name, sha256, bytes}
    flags: dict = field(default_factory=dict)
    task_seeds: dict = field(default_factory=dict)  # task label -> stream key
    wall_time_s: float = 0.0
    schema_version: int = SCHEMA_VERSION

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.resolved_config.encode()).hexdigest()

    def record_output(self, out_dir: str, name: str) -> None:
        path = os.path.join(out_dir, name)
        self.outputs.append(
            {"name": name, "sha256": sha256_file(path), "bytes": os.path.getsize(path)}
        )

    def to_json(self) -> str:
        body = {
            "schema_version": self.schema_version,
            "command": self.command,
            "seed": self.seed,
            "workers": self.workers,
            "config_hash": self.config_hash,
            "resolved_config": self.resolved_config,
            "code_version": self.code_version,
            "wall_time_s": self.wall_time_s,
            "flags": self.flags,
            "task_seeds": self.task_seeds,
            "outputs": self.outputs,
        }
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def write(self, out_dir: str) -> str:
        path = os.path.join(out_dir, "manifest.json")
        with open(path, "w") as fh:
            fh.write(self.to_json())
        return path

    @classmethod
    def load(cls, path: str) -> "RunManifest":
        with open(path) as fh:
            body = json.load(fh)
        if body.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported manifest schema {body.get('schema_version')!r}")
        m = cls(
            command=body["command"],
            seed=body["seed"],
            workers=body["workers"],
            resolved_config=body["resolved_config"],
            code_version=body["code_version"],
            outputs=body["outputs"],
            flags=body.get("flags", {}),
            task_seeds=body.get("task_seeds", {}),
            wall_time_s=body.get("wall_time_s", 0.0),
        )
        if body["config_hash"] != m.config_hash:
            raise ValueError("manifest config_hash does not match embedded config")
        return m


def compare_outputs(old: RunManifest, new_dir: str) -> list[str]:
    """Names of recorded outputs that are missing or differ under new_dir."""
    bad = []
    for rec in old.outputs:
        path = os.path.join(new_dir, rec["name"])
        if not os.path.exists(path) or sha256_file(path) != rec["sha256"]:
            bad.append(rec["name"])
    return bad
