#!/usr/bin/env python3
"""End-to-end checks of the command-line tool: argument handling, exit
codes, file outputs and their formats. Usage: cli_smoke.py <path-to-cli>."""

import json
import pathlib
import subprocess
import sys
import tempfile

CLI = sys.argv[1]
CHECKS = 0


def ok(cond, what):
    global CHECKS
    if not cond:
        raise AssertionError(what)
    CHECKS += 1


def run(*args, expect=0, cwd=None):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)
    ok(proc.returncode == expect,
       f"{args}: exit {proc.returncode} (wanted {expect}); stderr: {proc.stderr.strip()}")
    return proc


def lines(text):
    return text.strip().split("\n")


def check_coeffs():
    out = lines(run("coeffs", "--L", "2").stdout)
    ok(out == ["offset,alpha_1,alpha_2", "-1,-0.5,1", "1,0.5,1"], f"coeffs L2: {out}")

    out = lines(run("coeffs", "--L", "2", "--exact").stdout)
    ok(out == ["offset,alpha_1,alpha_2", "-1,-1/2,1", "1,1/2,1"], f"coeffs L2 exact: {out}")

    out = lines(run("coeffs", "--L", "4", "--exact").stdout)
    ok(len(out) == 5 and out[1] == "-2,1/12,-1/12,-1/2,1", f"coeffs L4 exact: {out}")

    out = lines(run("coeffs", "--L", "2", "--offsets", "1,2", "--exact").stdout)
    ok(out[1:] == ["1,2,-2", "2,-1/2,1"], f"one-sided coeffs: {out}")

    proc = run("coeffs", "--L", "1", expect=3)
    ok("error" in proc.stderr, f"coeffs L1 stderr: {proc.stderr}")


def check_sample(tmp):
    out = lines(run("sample", "ground", "50").stdout)
    ok(out[0] == "index,position_dimensionless", f"sample header: {out[0]}")
    ok(len(out) == 51, f"sample row count: {len(out)}")
    xs = [float(row.split(",")[1]) for row in out[1:]]
    ok(all(xs[i] == -xs[49 - i] for i in range(50)), "sample not mirror-symmetric")
    ok(all(a < b for a, b in zip(xs, xs[1:])), "sample not increasing")

    path = tmp / "worlds.csv"
    run("sample", "ground", "8", "--out", str(path))
    ok(path.read_text().startswith("index,position_dimensionless\n"), "sample --out content")

    out = lines(run("sample", "ground", "8", "--physical", "--mass", "1", "--omega", "0.5",
                    "--hbar", "1").stdout)
    ok(out[0] == "index,position", f"physical header: {out[0]}")

    run("sample", "excited", "41", expect=3)  # odd N puts a world on the node
    run("sample", "ground", expect=2)  # missing N


def check_run(tmp):
    outdir = tmp / "fig1"
    config = tmp / "run.ini"
    config.write_text(
        "[scenario]\nname = fig1_ground_toy\n"
        "[integration]\nsteps = 50\nrecord_every = 10\n"
        f"[output]\ndirectory = {outdir}\n")
    proc = run("run", "--config", str(config))
    ok(proc.stdout.startswith("fig1_ground_toy: Stationary after 50 steps"),
       f"run stdout: {proc.stdout}")
    for name in ("samples.csv", "trajectory.csv", "energy.csv", "summary.json",
                 "config_echo.ini"):
        ok((outdir / name).is_file(), f"missing output {name}")
    summary = json.loads((outdir / "summary.json").read_text())
    ok(summary["scenario"] == "fig1_ground_toy", "summary scenario")
    ok(summary["outcome"] == "Stationary", "summary outcome")
    ok(summary["worlds"] == 50, "summary worlds")
    ok((outdir / "config_echo.ini").read_text().startswith("# resolved configuration"),
       "config echo header")

    # identical configuration, identical bytes
    second = tmp / "fig1_again"
    run("run", "--config", str(config), "--out-dir", str(second))
    ok((outdir / "trajectory.csv").read_bytes() == (second / "trajectory.csv").read_bytes(),
       "trajectory bytes differ between identical runs")

    custom = tmp / "custom.ini"
    custom.write_text(
        "[ensemble]\nmodel = ground\nn = 12\n"
        "[integration]\ndt = 1e-5\nsteps = 20\nrecord_every = 5\n"
        f"[output]\ndirectory = {tmp / 'custom_out'}\nformats = json\n")
    proc = run("run", "--config", str(custom))
    ok(proc.stdout.startswith("run: "), f"custom run stdout: {proc.stdout}")
    ok((tmp / "custom_out" / "summary.json").is_file(), "custom summary missing")
    ok(not (tmp / "custom_out" / "samples.csv").exists(), "csv written despite formats = json")

    proc = run("run", "--config", str(tmp / "missing.ini"), expect=2)
    ok("config error" in proc.stderr, f"missing config stderr: {proc.stderr}")

    proc = run("run", "--config", str(config), "--out-dir", "/dev/null/x", expect=4)
    ok("io error" in proc.stderr, f"unwritable dir stderr: {proc.stderr}")


def check_forces(tmp):
    config = tmp / "forces.ini"
    config.write_text("[ensemble]\nmodel = excited\nn = 12\n"
                      "[potential]\nkind = rational\norder = 4\n")
    out = lines(run("forces", "--config", str(config)).stdout)
    ok(out[0] == "world_index,position,interworld_force,oracle_force,relative_error,flag",
       f"forces header: {out[0]}")
    ok(len(out) == 13, f"forces row count: {len(out)}")
    flags = [row.split(",")[5] for row in out[1:]]
    ok(flags[:4] == ["boundary"] * 4 and flags[8:] == ["boundary"] * 4,
       f"boundary flags: {flags}")
    ok(flags[5] == "near_node" and flags[6] == "near_node", f"node flags: {flags}")
    ok(flags[4] == "" and flags[7] == "", f"interior flags: {flags}")

    bare = tmp / "bare.ini"
    bare.write_text("[potential]\nkind = toy\n")
    proc = run("forces", "--config", str(bare), expect=2)
    ok("model and n" in proc.stderr, f"forces without ensemble: {proc.stderr}")


def check_scenario(tmp):
    out = lines(run("scenario", "--list").stdout)
    ok(out == [
        "fig1_ground_toy", "fig2_excited_toy", "fig3_truncated_toy", "fig4_two_free_L4",
        "fig5_ten_free_L4", "fig6_ten_free_L6", "figA1_two_free_equiv"
    ], f"scenario list: {out}")

    run("scenario", "does_not_exist", expect=2)
    run("scenario", expect=2)  # no name, no --list

    proc = run("scenario", "fig2_excited_toy", "--steps", "200", "--record-every", "100",
               "--out-dir", str(tmp / "fig2"))
    ok(proc.stdout.startswith("fig2_excited_toy: "), f"scenario stdout: {proc.stdout}")
    ok((tmp / "fig2" / "summary.json").is_file(), "scenario summary missing")

    # default output directory is out/<name> under the working directory
    run("scenario", "fig1_ground_toy", "--steps", "10", cwd=tmp)
    ok((tmp / "out" / "fig1_ground_toy" / "summary.json").is_file(), "default out dir")


def main():
    with tempfile.TemporaryDirectory() as tmpdir:
        tmp = pathlib.Path(tmpdir)
        check_coeffs()
        check_sample(tmp)
        check_run(tmp)
        check_forces(tmp)
        check_scenario(tmp)
    print(f"cli smoke: {CHECKS} checks passed")


if __name__ == "__main__":
    main()
