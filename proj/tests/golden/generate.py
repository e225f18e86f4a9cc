#!/usr/bin/env python3
"""Writes the frame corpus: NAME.json holds the frame fields, NAME.bin the
expected wire bytes (u32 big-endian length + canonical body)."""

import json
import pathlib
import struct

FRAMES = {
    "topic_joint_states": {
        "kind": "topic",
        "name": "joint_states",
        "payload": {
            "name": ["joint_1", "joint_2", "joint_3", "joint_4", "joint_5", "joint_6", "joint_7"],
            "position": [0.0194, 0.3563, 3.118, -1.4778, 0.0085, -1.3076, -0.0049],
            "velocity": [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            "stamp": 12.34,
        },
    },
    "topic_target_pose": {
        "kind": "topic",
        "name": "target_pose",
        "payload": {"pose": [0.45, -0.15, 0.2, 0.0, 1.0, 0.0, 0.0]},
    },
    "request_execute": {
        "kind": "request",
        "name": "ExecuteTask",
        "id": 7,
        "payload": {
            "moves": [
                {
                    "instance_id": "mustard_1",
                    "initial_pose": [0.45, -0.15, 0.05, 1.0, 0.0, 0.0, 0.0],
                    "target_pose": [0.45, 0.15, 0.05, 1.0, 0.0, 0.0, 0.0],
                }
            ]
        },
    },
    "request_empty_payload": {"kind": "request", "name": "GetScene", "id": 0, "payload": {}},
    "request_large_id": {"kind": "request", "name": "Subscribe", "id": 9007199254740993,
                         "payload": {"topic": "object_poses"}},
    "request_negative_id": {"kind": "request", "name": "ResetGhosts", "id": -12, "payload": {}},
    "response_settle": {
        "kind": "response",
        "name": "SettlePreview",
        "id": 3,
        "payload": {
            "final_pose": [0.45, 0.15, 0.085, 1.0, 0.0, 0.0, 0.0],
            "stable": True,
            "support": {"instance_id": "crate_1", "kind": "on_object"},
            "trace": [],
        },
    },
    "error_malformed": {"kind": "error", "name": "malformed", "id": None,
                        "payload": {"message": "frame field 'kind' missing or not a string"}},
    "error_unknown_service": {"kind": "error", "name": "Teleport", "id": 11,
                              "payload": {"message": "unknown service 'Teleport'"}},
    "topic_unicode": {"kind": "topic", "name": "note",
                      "payload": {"text": "café → über \"quoted\"\n", "nested": {"b": [1, -2, 3.5], "a": None}}},
}


def body(frame):
    out = {k: v for k, v in frame.items() if not (k == "id" and v is None)}
    return json.dumps(out, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def main():
    root = pathlib.Path(__file__).resolve().parent / "frames"
    root.mkdir(exist_ok=True)
    for name, frame in FRAMES.items():
        data = body(frame)
        (root / f"{name}.json").write_text(json.dumps(frame, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        (root / f"{name}.bin").write_bytes(struct.pack(">I", len(data)) + data)


if __name__ == "__main__":
    main()
