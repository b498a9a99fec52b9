//! Matplotlib script emission for finished bundles. Scripts are plain text
//! written next to the data; nothing here imports or runs Python.

use std::path::{Path, PathBuf};

use super::{Manifest, MANIFEST};
use crate::error::{Error, Result};
use crate::output::atomic_write;

const PREAMBLE: &str = "import csv\nimport os\nimport matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\nHERE = os.path.dirname(os.path.abspath(__file__))\n\n\ndef load(name):\n    with open(os.path.join(HERE, name)) as fh:\n        rows = list(csv.DictReader(fh))\n    return {k: [r[k] for r in rows] for k in rows[0]} if rows else {}\n\n\ndef num(col):\n    return [float(v) for v in col]\n\n";

fn header_of(dir: &Path, name: &str) -> Result<Vec<String>> {
    let path = dir.join(name);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Ok(text
        .lines()
        .next()
        .unwrap_or("")
        .split(',')
        .map(str::to_string)
        .collect())
}

fn require(dir: &Path, name: &str, cols: &[&str]) -> Result<Vec<String>> {
    let header = header_of(dir, name)?;
    for c in cols {
        if !header.iter().any(|h| h == c) {
            return Err(Error::Config(format!("{name}: missing column `{c}`")));
        }
    }
    Ok(header)
}

fn py_list(items: &[String]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| format!("{s:?}")).collect();
    format!("[{}]", quoted.join(", "))
}

fn files_matching<'a>(m: &'a Manifest, prefix: &str, suffix: &str) -> Vec<&'a String> {
    let mut v: Vec<&String> = m
        .files
        .iter()
        .filter(|f| f.starts_with(prefix) && f.ends_with(suffix))
        .collect();
    v.sort();
    v
}

fn thermalization_script(dir: &Path, m: &Manifest) -> Result<Option<String>> {
    let g = files_matching(m, "two_point_", ".csv");
    let model = g.iter().find(|f| !f.contains("_syk_")).copied();
    let Some(model) = model else { return Ok(None) };
    require(dir, model, &["t", "G_avg"])?;
    let f_name = model.replacen("two_point_", "four_point_", 1);
    require(dir, &f_name, &["t", "F_avg"])?;
    let syk_g: Vec<String> = g
        .iter()
        .filter(|f| f.contains("_syk_"))
        .map(|s| s.to_string())
        .collect();
    for s in &syk_g {
        require(dir, s, &["t", "G_avg"])?;
    }
    let syk_f: Vec<String> = syk_g
        .iter()
        .map(|s| s.replacen("two_point_", "four_point_", 1))
        .collect();
    Ok(Some(format!(
        "{PREAMBLE}G = load({model:?})\nF = load({f_name:?})\nSYK_G = {sg}\nSYK_F = {sf}\n\
fig, ax = plt.subplots(2, 3, figsize=(13, 7))\n\
t = num(G[\"t\"])\n\
for k in G:\n    if k.startswith(\"G_\") and k != \"G_avg\":\n        ax[0][0].plot(t, num(G[k]), lw=0.8, label=k)\n\
ax[0][0].set_title(\"(a) two-point, model\")\n\
ax[0][1].plot(t, num(G[\"G_avg\"]), color=\"k\", label=\"model\")\n\
for name in SYK_G:\n    d = load(name)\n    ax[0][1].plot(num(d[\"t\"]), num(d[\"G_avg\"]), lw=0.6, alpha=0.6)\n\
ax[0][1].set_title(\"(b) G_avg vs SYK\")\n\
for name in SYK_G:\n    d = load(name)\n    ax[0][2].plot(num(d[\"t\"]), [abs(v) for v in num(d[\"G_avg\"])], lw=0.6)\n\
ax[0][2].set_title(\"(c) SYK |G_avg|\")\n\
for k in F:\n    if k.startswith(\"F_\") and k != \"F_avg\":\n        ax[1][0].plot(num(F[\"t\"]), num(F[k]), lw=0.8, label=k)\n\
ax[1][0].set_title(\"(d) four-point, model\")\n\
ax[1][1].plot(num(F[\"t\"]), num(F[\"F_avg\"]), color=\"k\")\n\
for name in SYK_F:\n    d = load(name)\n    ax[1][1].plot(num(d[\"t\"]), num(d[\"F_avg\"]), lw=0.6, alpha=0.6)\n\
ax[1][1].set_title(\"(e) F_avg vs SYK\")\n\
ax[1][2].plot(t, [abs(v) for v in num(G[\"G_avg\"])], color=\"k\")\n\
ax[1][2].set_yscale(\"log\")\n\
ax[1][2].set_title(\"(f) |G_avg|, log scale\")\n\
for a in ax.flat:\n    a.set_xlabel(\"t\")\n\
ax[0][0].legend(fontsize=6)\n\
fig.tight_layout()\n\
fig.savefig(os.path.join(HERE, \"thermalization.png\"), dpi=150)\n",
        sg = py_list(&syk_g),
        sf = py_list(&syk_f),
    )))
}

fn cross_script(dir: &Path, m: &Manifest) -> Result<Option<String>> {
    let files: Vec<String> = files_matching(m, "four_point_cross_", ".csv")
        .into_iter()
        .cloned()
        .collect();
    if files.is_empty() {
        return Ok(None);
    }
    for f in &files {
        require(dir, f, &["t"])?;
    }
    Ok(Some(format!(
        "{PREAMBLE}FILES = {fl}\n\
fig, axes = plt.subplots(1, len(FILES), figsize=(4 * len(FILES), 3.5), squeeze=False)\n\
for a, name in zip(axes[0], FILES):\n    d = load(name)\n    t = num(d[\"t\"])\n    for k in d:\n        if k != \"t\":\n            a.plot(t, num(d[k]), lw=0.5)\n    a.set_title(name[:-4])\n    a.set_xlabel(\"t\")\n\
fig.tight_layout()\n\
fig.savefig(os.path.join(HERE, \"four_point_cross.png\"), dpi=150)\n",
        fl = py_list(&files)
    )))
}

fn teleport_script(dir: &Path, m: &Manifest, out: &str) -> Result<Option<String>> {
    let files: Vec<String> = files_matching(m, "teleport_", ".csv")
        .into_iter()
        .filter(|f| !f.starts_with("teleport_peaks_"))
        .cloned()
        .collect();
    if files.is_empty() {
        return Ok(None);
    }
    for f in &files {
        require(dir, f, &["t", "I_PT"])?;
    }
    Ok(Some(format!(
        "{PREAMBLE}FILES = {fl}\n\
groups = {{}}\n\
for name in FILES:\n    groups.setdefault(name.rsplit(\"_\", 1)[0], []).append(name)\n\
fig, axes = plt.subplots(1, len(groups), figsize=(5 * len(groups), 3.5), squeeze=False)\n\
for a, (g, names) in zip(axes[0], sorted(groups.items())):\n    for name in names:\n        d = load(name)\n        a.plot(num(d[\"t\"]), num(d[\"I_PT\"]), lw=0.8, label=name.rsplit(\"_\", 1)[1][:-4])\n    a.set_title(g)\n    a.set_xlabel(\"t\")\n    a.set_ylabel(\"I(P:T) [bits]\")\n    a.legend(fontsize=5, ncol=2)\n\
fig.tight_layout()\n\
fig.savefig(os.path.join(HERE, {png:?}), dpi=150)\n",
        fl = py_list(&files),
        png = format!("{out}.png"),
    )))
}

fn winding_script(dir: &Path, m: &Manifest) -> Result<Option<String>> {
    let files: Vec<String> = files_matching(m, "winding_", "_sizes.csv")
        .into_iter()
        .cloned()
        .collect();
    if files.is_empty() {
        return Ok(None);
    }
    for f in &files {
        require(dir, f, &["l", "re_q", "im_q"])?;
    }
    Ok(Some(format!(
        "{PREAMBLE}FILES = {fl}\n\
fig, ax = plt.subplots(figsize=(5, 5))\n\
for name in FILES:\n    d = load(name)\n    x, y = num(d[\"re_q\"]), num(d[\"im_q\"])\n    ax.plot(x, y, marker=\"o\", ms=3, lw=0.8, label=name[8:-10])\n\
ax.axhline(0, color=\"grey\", lw=0.4)\n\
ax.axvline(0, color=\"grey\", lw=0.4)\n\
ax.set_xlabel(\"Re q(l)\")\nax.set_ylabel(\"Im q(l)\")\nax.legend(fontsize=6)\n\
fig.tight_layout()\n\
fig.savefig(os.path.join(HERE, \"winding.png\"), dpi=150)\n",
        fl = py_list(&files)
    )))
}

fn ensemble_script(dir: &Path, m: &Manifest) -> Result<Option<String>> {
    let name = "winding_ensemble.csv";
    if !m.files.iter().any(|f| f == name) {
        return Ok(None);
    }
    require(dir, name, &["family", "trained", "r_bar", "chi"])?;
    Ok(Some(format!(
        "{PREAMBLE}d = load({name:?})\n\
fig, ax = plt.subplots(figsize=(6, 4.5))\n\
fams = sorted(set(d[\"family\"]))\n\
for f in fams:\n    idx = [i for i, v in enumerate(d[\"family\"]) if v == f and d[\"r_bar\"][i] != \"NaN\"]\n    x = [float(d[\"r_bar\"][i]) for i in idx]\n    y = [float(d[\"chi\"][i]) for i in idx]\n    ax.scatter(x, y, s=14, label=f)\n    st = [i for i in idx if d[\"trained\"][i] == \"1\"]\n    ax.scatter([float(d[\"r_bar\"][i]) for i in st], [float(d[\"chi\"][i]) for i in st], marker=\"*\", s=90, edgecolor=\"k\", facecolor=\"none\")\n\
ax.set_xlabel(\"r_bar\")\nax.set_ylabel(\"chi\")\nax.legend(fontsize=7)\n\
fig.tight_layout()\n\
fig.savefig(os.path.join(HERE, \"winding_ensemble.png\"), dpi=150)\n"
    )))
}

fn scaling_script(dir: &Path, m: &Manifest) -> Result<Option<String>> {
    let name = "ising_scaling.csv";
    if !m.files.iter().any(|f| f == name) {
        return Ok(None);
    }
    require(dir, name, &["N", "seed", "r_bar"])?;
    Ok(Some(format!(
        "{PREAMBLE}d = load({name:?})\n\
fig, ax = plt.subplots(figsize=(5, 4))\n\
ax.scatter(num(d[\"N\"]), [float(v) for v in d[\"r_bar\"]], s=10, alpha=0.6)\n\
ax.set_xlabel(\"N\")\nax.set_ylabel(\"r_bar\")\n\
fig.tight_layout()\n\
fig.savefig(os.path.join(HERE, \"ising_scaling.png\"), dpi=150)\n"
    )))
}

/// Writes `plot_*.py` scripts for the bundle in `dir` and returns their
/// paths. A directory without a manifest yields no scripts and a warning on
/// stderr; a manifest whose CSVs lack the expected columns is an error.
pub fn emit_plots(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.join(MANIFEST).exists() {
        eprintln!(
            "warning: no {MANIFEST} in {}; nothing to plot",
            dir.display()
        );
        return Ok(vec![]);
    }
    let m = Manifest::read(dir)?;
    let candidates: Vec<(&str, Option<String>)> = match m.experiment.as_str() {
        "thermalization" => vec![("thermalization", thermalization_script(dir, &m)?)],
        "fourpoint-cross" => vec![("four_point_cross", cross_script(dir, &m)?)],
        "teleport-symmetric" | "teleport-fixed" => {
            vec![("teleport", teleport_script(dir, &m, "teleport")?)]
        }
        "winding-report" => vec![("winding", winding_script(dir, &m)?)],
        "winding-ensemble" => vec![("winding_ensemble", ensemble_script(dir, &m)?)],
        "models23" => vec![
            ("thermalization", thermalization_script(dir, &m)?),
            ("teleport", teleport_script(dir, &m, "teleport")?),
            ("winding", winding_script(dir, &m)?),
        ],
        "ising-scaling" => vec![("ising_scaling", scaling_script(dir, &m)?)],
        other => {
            return Err(Error::Config(format!(
                "unknown experiment `{other}` in manifest"
            )))
        }
    };
    let mut written = Vec::new();
    for (stem, script) in candidates {
        if let Some(s) = script {
            let p = dir.join(format!("plot_{stem}.py"));
            atomic_write(&p, s.as_bytes())?;
            written.push(p);
        }
    }
    if written.is_empty() {
        eprintln!(
            "warning: bundle in {} has no plottable files",
            dir.display()
        );
    }
    Ok(written)
}
