"""Command-line pipeline: dataset generation, transforms, reconstruction,
and evaluation.

Every subcommand exits 0 on success and nonzero with a one-line
diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .codec import SpkError, read_spk
from .dataset import generate_dataset
from .imgio import read_gray, write_gray
from .isi import gisi_sweep, lisi_transform
from .manifest import ConfigError, DatasetConfig
from .metrics import psnr, ssim, write_metrics_csv, write_summary
from .recon import from_uint8, gisi_tfi_reconstruct, tfi_reconstruct, \
    tfp_reconstruct, to_uint8
from .simulator import SimConfig
from .stream import contiguous_windows
from .tensorio import TenFormatError, write_ten

TRANSFORM_MODES = ("lisi", "gisi-forward", "gisi-backward", "gisi-combined")
RECON_METHODS = ("tfp", "tfi", "gisi-tfi")


class CliError(ValueError):
    pass


def _sim_config(path: str | None) -> SimConfig:
    if path is None:
        return SimConfig()
    return DatasetConfig.from_file(path).sim


def _windows(stream_path: str, num_windows: int, window_len: int):
    stream = read_spk(stream_path)
    if num_windows * window_len > stream.length:
        raise CliError(
            f"stream {stream_path} has {stream.length} ticks, "
            f"need {num_windows}*{window_len}")
    return contiguous_windows(stream, num_windows, window_len)


def cmd_gen_dataset(args) -> int:
    config = DatasetConfig.from_file(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    manifest = generate_dataset(config, args.out)
    print(f"wrote {len(manifest.scenes)} scenes to {args.out}")
    return 0


def cmd_transform(args) -> int:
    windows = _windows(args.stream, args.num_windows, args.window_len)
    if args.mode == "lisi":
        maps = [lisi_transform(w) for w in windows]
    else:
        sweep = gisi_sweep(windows)
        maps = {"gisi-forward": sweep.gisi_forward,
                "gisi-backward": sweep.gisi_backward,
                "gisi-combined": sweep.gisi_combined}[args.mode]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, isi_map in enumerate(maps):
        write_ten(isi_map.intervals.astype(np.float32), out / f"win{i:04d}.isi.ten")
        flags = np.stack([isi_map.censored_prev, isi_map.censored_next])
        write_ten(flags.astype(np.float32), out / f"win{i:04d}.cens.ten")
    print(f"wrote {len(maps)} {args.mode} maps to {out}")
    return 0


def cmd_recon(args) -> int:
    cfg = _sim_config(args.config)
    windows = _windows(args.stream, args.num_windows, args.window_len)
    if args.method == "tfp":
        images = [tfp_reconstruct(w, cfg) for w in windows]
    elif args.method == "tfi":
        images = [tfi_reconstruct(lisi_transform(w), cfg) for w in windows]
    else:
        images = gisi_tfi_reconstruct(windows, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, image in enumerate(images):
        write_gray(to_uint8(image), out / f"win{i:04d}.{args.image_format}")
    print(f"wrote {len(images)} {args.method} images to {out}")
    return 0


def _collect_images(root: Path) -> list[Path]:
    return sorted(p.relative_to(root) for ext in ("*.pgm", "*.png")
                  for p in root.rglob(ext))


def cmd_eval(args) -> int:
    recon_dir, gt_dir = Path(args.recon_dir), Path(args.gt_dir)
    rels = _collect_images(gt_dir)
    if not rels:
        raise CliError(f"no images found under {gt_dir}")
    rows = []
    frame_index: dict[str, int] = {}
    for rel in rels:
        candidate = recon_dir / rel
        if not candidate.exists():
            raise CliError(f"missing reconstruction for {rel}")
        scene = rel.parent.as_posix()
        frame = frame_index.get(scene, 0)
        frame_index[scene] = frame + 1
        gt = from_uint8(read_gray(gt_dir / rel))
        pred = from_uint8(read_gray(candidate))
        rows.append((scene, frame, psnr(gt, pred), ssim(gt, pred)))
    out = Path(args.out) if args.out else recon_dir / "metrics.csv"
    write_metrics_csv(rows, out)
    write_summary(rows, out.with_suffix(".summary.txt"))
    mean_psnr = float(np.mean([r[2] for r in rows]))
    mean_ssim = float(np.mean([r[3] for r in rows]))
    print(f"{len(rows)} frames  mean psnr {mean_psnr:.4f}  mean ssim {mean_ssim:.6f}")
    return 0


def cmd_export_tensors(args) -> int:
    windows = _windows(args.stream, args.num_windows, args.window_len)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, window in enumerate(windows):
        write_ten(window.to_dense().astype(np.float32), out / f"win{i:04d}.spk.ten")
    print(f"wrote {len(windows)} window tensors to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikecam",
        description="Spike-camera stream simulation, transforms, and evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dataset", help="synthesize a low-light dataset")
    p.add_argument("--config", required=True, help="key=value config file")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("transform", help="export interval maps as .ten tensors")
    p.add_argument("stream", help=".spk input")
    p.add_argument("--mode", required=True, choices=TRANSFORM_MODES)
    p.add_argument("--out", required=True)
    p.add_argument("--window-len", type=int, default=41)
    p.add_argument("--num-windows", type=int, default=21)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("recon", help="classical reconstruction to images")
    p.add_argument("stream", help=".spk input")
    p.add_argument("--method", required=True, choices=RECON_METHODS)
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None, help="config file with sim params")
    p.add_argument("--window-len", type=int, default=41)
    p.add_argument("--num-windows", type=int, default=21)
    p.add_argument("--image-format", default="pgm", choices=("pgm", "png"))
    p.set_defaults(func=cmd_recon)

    p = sub.add_parser("eval", help="PSNR/SSIM report against ground truth")
    p.add_argument("recon_dir")
    p.add_argument("gt_dir")
    p.add_argument("--out", default=None, help="CSV path (default: recon dir)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("export-tensors", help="export spike windows as .ten")
    p.add_argument("stream", help=".spk input")
    p.add_argument("--out", required=True)
    p.add_argument("--window-len", type=int, default=41)
    p.add_argument("--num-windows", type=int, default=21)
    p.set_defaults(func=cmd_export_tensors)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConfigError, SpkError, TenFormatError, ValueError,
            IndexError, OSError) as exc:
        print(f"spikecam: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
