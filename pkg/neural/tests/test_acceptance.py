"""Secondary acceptance: desk-scale substitutes for the full-scale
training results, one printed PASS/FAIL line each (the GISI-vs-LISI
ablation is reported, not gated)."""

import numpy as np
import torch
from torch.autograd import gradcheck

from conftest import SCENES, toy_train_config
from lrrepnet.data import load_scenes, scene_to_tensors
from lrrepnet.fileio import load_dataset_index, read_gray
from lrrepnet.metrics import psnr
from lrrepnet.model import (LrRepConfig, LrRepNet, bidirectional_inference,
                            l1_loss)
from lrrepnet.train import load_checkpoint, train_ablation


def report(name: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def test_a_toy_training_loss_strictly_decreases(toy_run):
    logs, _ = toy_run
    losses = [row.train_loss for row in logs]
    ok = len(losses) == 5 and all(b < a for a, b in zip(losses, losses[1:]))
    report("(a) toy training loss strictly decreases",
           ok, " -> ".join(f"{v:.4f}" for v in losses))


def test_b_neural_beats_tfp_on_toy_split(toy_run, toy_dataset, tfp_baseline):
    _, out = toy_run
    state = load_checkpoint(out / "checkpoint.pt")
    model = LrRepNet(LrRepConfig(**state["model_config"]))
    model.load_state_dict(state["model"])

    index = load_dataset_index(toy_dataset)
    scenes = load_scenes(index)
    val_ids = SCENES[-2:]  # the training run held these out
    neural_scores, tfp_scores = [], []
    for scene in scenes:
        if scene.scene_id not in val_ids:
            continue
        windows, fwd, bwd, targets = scene_to_tensors(scene)
        preds = bidirectional_inference(model, windows, fwd, bwd)
        for i in range(preds.shape[1]):
            truth = targets[0, i, 0].numpy()
            neural_scores.append(psnr(truth, preds[0, i, 0].numpy()))
            tfp = read_gray(tfp_baseline / scene.scene_id / f"win{i:04d}.pgm")
            tfp_scores.append(psnr(truth, tfp))
    neural_mean = float(np.mean(neural_scores))
    tfp_mean = float(np.mean(tfp_scores))
    report("(b) neural PSNR beats TFP on the toy test split",
           neural_mean > tfp_mean,
           f"neural {neural_mean:.2f} dB vs TFP {tfp_mean:.2f} dB")


def test_c_causality_invariants_bit_exact():
    torch.manual_seed(0)
    model = LrRepNet(LrRepConfig(channels=8, window_len=9))
    model.eval()
    gen = torch.Generator().manual_seed(1)
    windows = (torch.rand(1, 5, 9, 16, 16, generator=gen) < 0.2).float()
    gisi_f = torch.rand(1, 5, 1, 16, 16, generator=gen)
    gisi_b = torch.rand(1, 5, 1, 16, 16, generator=gen)
    with torch.no_grad():
        _, fwd_a, bwd_a = model(windows, gisi_f, gisi_b, return_features=True)
        future = windows.clone()
        future[:, 3:] = 1.0 - future[:, 3:]
        _, fwd_b, _ = model(future, gisi_f, gisi_b, return_features=True)
        past = windows.clone()
        past[:, :2] = 1.0 - past[:, :2]
        _, _, bwd_b = model(past, gisi_f, gisi_b, return_features=True)
    forward_ok = all(torch.equal(fwd_a[i], fwd_b[i]) for i in range(3))
    backward_ok = all(torch.equal(bwd_a[i], bwd_b[i]) for i in range(2, 5))
    report("(c) causality invariants bit-exact",
           forward_ok and backward_ok,
           "forward features ignore the future, backward the past")


def test_d_gate_recomposition():
    torch.manual_seed(2)
    model = LrRepNet(LrRepConfig(channels=8, window_len=9))
    window = torch.rand(2, 9, 24, 24)
    gisi = torch.rand(2, 1, 24, 24)
    with torch.no_grad():
        rep, f_g, f_s, beta, alpha = model.lr_rep_forward(window, gisi,
                                                          return_parts=True)
    err = float((rep - (beta * f_g + alpha * f_s)).abs().max())
    report("(d) gated-fusion recomposition", err <= 1e-6, f"max err {err:.2e}")


def test_e_finite_difference_gradients():
    torch.manual_seed(3)
    model = LrRepNet(LrRepConfig(channels=4, window_len=5)).double()
    window = torch.rand(1, 5, 8, 8, dtype=torch.double, requires_grad=True)
    gisi = torch.rand(1, 1, 8, 8, dtype=torch.double, requires_grad=True)
    cur = torch.rand(1, 4, 8, 8, dtype=torch.double, requires_grad=True)
    car = torch.rand(1, 4, 8, 8, dtype=torch.double, requires_grad=True)
    checks = {
        "lr-rep": gradcheck(lambda w, g: model.lr_rep_forward(w, g).sum(),
                            (window, gisi), eps=1e-6, atol=1e-4),
        "backbone": gradcheck(lambda t: model.backbone_forward(t).sum(),
                              (cur,), eps=1e-6, atol=1e-4),
        "fusion": gradcheck(
            lambda a, b: model.fuse_step(a, b, "backward").sum(),
            (cur, car), eps=1e-6, atol=1e-4),
        "head": gradcheck(lambda a, b: model.reconstruct_head(a, b).sum(),
                          (cur, car), eps=1e-6, atol=1e-4),
        "loss": gradcheck(
            lambda p: l1_loss(p, torch.zeros(1, 2, 1, 4, 4,
                                             dtype=torch.double)),
            (torch.rand(1, 2, 1, 4, 4, dtype=torch.double,
                        requires_grad=True),), eps=1e-6, atol=1e-4),
    }
    report("(e) finite-difference gradient checks", all(checks.values()),
           ", ".join(checks))


def test_f_gisi_vs_lisi_ablation_report(toy_dataset, tmp_path):
    cfg = toy_train_config(epochs=3, channels=8, crop=24, seed=5)
    results = train_ablation(toy_dataset, tmp_path / "ablation", cfg)
    # reported, not gated: the full-scale result favors the globally
    # completed intervals by a small margin
    report("(f) representation ablation (reported, non-gating)", True,
           f"GISI-rep {results['gisi']:.2f} dB vs "
           f"LISI-rep {results['lisi']:.2f} dB on the toy val split")
