"""Command-line entry points: train a model, run inference to images."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .data import load_scenes, scene_to_tensors
from .fileio import load_dataset_index
from .metrics import psnr
from .model import LrRepConfig, LrRepNet, bidirectional_inference
from .train import TrainConfig, load_checkpoint, train


def write_pgm(image01: np.ndarray, path) -> None:
    u8 = np.clip(np.floor(image01 * 255.0 + 0.5), 0, 255).astype(np.uint8)
    h, w = u8.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(u8.tobytes())


def cmd_train(args) -> int:
    cfg = TrainConfig(
        epochs=args.epochs, batch_size=args.batch_size, crop=args.crop,
        k_windows=args.k_windows, seed=args.seed, val_scenes=args.val_scenes,
        channels=args.channels, rep_source=args.rep_source,
        gisi_mode=args.gisi_mode)
    train(args.data, args.out, cfg, resume=args.resume)
    return 0


def cmd_infer(args) -> int:
    state = load_checkpoint(args.checkpoint)
    model = LrRepNet(LrRepConfig(**state["model_config"]))
    model.load_state_dict(state["model"])
    index = load_dataset_index(args.data)
    scenes = load_scenes(index, state["train_config"]["rep_source"],
                         state["train_config"]["gisi_mode"])
    out = Path(args.out)
    scores = []
    for scene in scenes:
        windows, fwd, bwd, targets = scene_to_tensors(scene)
        preds = bidirectional_inference(model, windows, fwd, bwd)
        scene_dir = out / scene.scene_id
        scene_dir.mkdir(parents=True, exist_ok=True)
        for i in range(preds.shape[1]):
            write_pgm(preds[0, i, 0].numpy(), scene_dir / f"win{i:04d}.pgm")
            scores.append(psnr(targets[0, i, 0].numpy(), preds[0, i, 0].numpy()))
    print(f"wrote {len(scores)} frames to {out}  mean psnr {np.mean(scores):.3f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrrepnet", description="Recurrent spike-stream reconstruction")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train")
    p.add_argument("--data", required=True, help="spikecam dataset directory")
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--batch-size", type=int, default=TrainConfig.batch_size)
    p.add_argument("--crop", type=int, default=TrainConfig.crop)
    p.add_argument("--k-windows", type=int, default=TrainConfig.k_windows)
    p.add_argument("--channels", type=int, default=TrainConfig.channels)
    p.add_argument("--seed", type=int, default=TrainConfig.seed)
    p.add_argument("--val-scenes", type=int, default=TrainConfig.val_scenes)
    p.add_argument("--rep-source", choices=("gisi", "lisi"), default="gisi")
    p.add_argument("--gisi-mode", choices=("per-direction", "combined"),
                   default="per-direction")
    p.add_argument("--resume", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("infer")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_infer)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"lrrepnet: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
