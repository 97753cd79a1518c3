// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Dissolving an inherited blossom by major paths: shell searches first,
//! then a single bounded search from the last free vertex.

use crate::eligibility::Criterion;
use crate::error::{violation, SolveResult};
use crate::graph::VertexId;
use crate::queue::QueueKind;
use crate::report::ScaleReport;
use crate::scaling::Ctx;
use crate::verify::{check_state, Mode};

/// Per-call scratch: which shell last claimed each vertex.
struct Claims {
    stamp: Vec<(u64, usize)>,
    iter: u64,
}

/// Child of `id` holding more than half its vertices.
fn major_child(ctx: &Ctx, id: usize) -> Option<usize> {
    let nd = &ctx.st.old.nodes[id];
    nd.children
        .iter()
        .copied()
        .find(|&c| 2 * ctx.st.old.nodes[c].size() > nd.size())
}

fn major_path(ctx: &Ctx, r: usize) -> Vec<usize> {
    let mut p = vec![r];
    while let Some(c) = major_child(ctx, *p.last().unwrap()) {
        p.push(c);
    }
    p
}

fn free_in(ctx: &Ctx, members: &[VertexId]) -> Vec<VertexId> {
    members
        .iter()
        .copied()
        .filter(|&v| !ctx.st.mate.is_matched(v))
        .collect()
}

/// Vertices of `outer` not in `inner`.
fn shell_members(ctx: &Ctx, outer: usize, inner: Option<usize>) -> Vec<VertexId> {
    let nodes = &ctx.st.old.nodes;
    match inner {
        None => nodes[outer].members.clone(),
        Some(d) => nodes[outer]
            .members
            .iter()
            .copied()
            .filter(|&v| !nodes[d].contains(v))
            .collect(),
    }
}

/// Dissolves the inherited blossom `b` and everything inside it.
pub(crate) fn gabow_dissolve(ctx: &mut Ctx, b: usize, rep: &mut ScaleReport) -> SolveResult<()> {
    rep.gabow_calls += 1;
    let members = ctx.st.old.nodes[b].members.clone();
    let check = ctx.opts.check;
    let mut base = None;
    if check {
        entry_checks(ctx, b, &members)?;
        let y0: Vec<i64> = members.iter().map(|&v| ctx.st.y[v]).collect();
        base = Some((y0, ctx.st.dual_objective(&members), free_in(ctx, &members).len() % 2));
    }
    let order: Vec<usize> = ctx.st.old.postorder(b);
    let roots: Vec<usize> = order
        .into_iter()
        .filter(|&r| r == b || ctx.st.old.nodes[r].parent.map_or(true, |p| major_child(ctx, p) != Some(r)))
        .collect();
    if check {
        disjoint_by_rank(ctx, &roots)?;
    }
    let mut claims = Claims {
        stamp: vec![(0, 0); ctx.st.g.vertex_capacity()],
        iter: 0,
    };
    for r in roots {
        if !ctx.st.old.nodes[r].alive {
            continue;
        }
        let before = if check { Some(ctx.st.dual_objective(&members)) } else { None };
        dismantle_path(ctx, r, &mut claims, rep)?;
        if let Some(prev) = before {
            let now = ctx.st.dual_objective(&members);
            if now > prev {
                return violation(format!("dual objective of blossom {} rose from {} to {}", b, prev, now));
            }
        }
    }
    if let Some((y0, _, parity)) = base {
        for (k, &v) in members.iter().enumerate() {
            if ctx.st.y[v] < y0[k] {
                return violation(format!("y({}) fell from {} to {}", v, y0[k], ctx.st.y[v]));
            }
        }
        if free_in(ctx, &members).len() % 2 != parity {
            return violation(format!("free parity inside blossom {} changed", b));
        }
        if ctx.st.old.postorder(b).iter().any(|&x| ctx.st.old.nodes[x].alive) {
            return violation(format!("blossom {} not fully dissolved", b));
        }
        let v = check_state(&ctx.st, Mode::Mixed);
        rep.violations += v.len();
        if let Some(f) = v.first() {
            return violation(format!("after dissolving {}: {} ({:?}) {}", b, f.clause, f.edge, f.detail));
        }
    }
    Ok(())
}

fn entry_checks(ctx: &Ctx, b: usize, members: &[VertexId]) -> SolveResult<()> {
    let st = &ctx.st;
    let inside = |v: VertexId| st.old.nodes[b].contains(v);
    for &v in members {
        for &e in st.g.adj(v) {
            let ed = st.g.edge(e);
            if st.g.edge_active(e) && inside(ed.u) && inside(ed.v) && st.yz(e) < st.w[e] {
                return violation(format!("edge {} inside blossom {} not dominated at entry", e, b));
            }
        }
    }
    for e in st.old.blossom_edges(b) {
        if st.yz(e) > st.w[e] + 6 {
            return violation(format!("blossom edge {} has yz - w = {} at entry", e, st.yz(e) - st.w[e]));
        }
    }
    Ok(())
}

/// Major-path roots of equal rank must be disjoint.
fn disjoint_by_rank(ctx: &Ctx, roots: &[usize]) -> SolveResult<()> {
    let rank = |r: usize| usize::BITS - ctx.st.old.nodes[r].size().leading_zeros();
    let mut seen: Vec<(u32, Vec<bool>)> = Vec::new();
    for &r in roots {
        let k = rank(r);
        let pos = match seen.iter().position(|s| s.0 == k) {
            Some(p) => p,
            None => {
                seen.push((k, vec![false; ctx.st.g.vertex_capacity()]));
                seen.len() - 1
            }
        };
        for &v in &ctx.st.old.nodes[r].members {
            if seen[pos].1[v] {
                return violation(format!("major paths of rank {} overlap at vertex {}", k, v));
            }
            seen[pos].1[v] = true;
        }
    }
    Ok(())
}

fn alive_chain(ctx: &Ctx, path: &[usize]) -> Vec<usize> {
    path.iter().copied().filter(|&x| ctx.st.old.nodes[x].alive).collect()
}

fn dismantle_path(ctx: &mut Ctx, r: usize, claims: &mut Claims, rep: &mut ScaleReport) -> SolveResult<()> {
    let path = major_path(ctx, r);
    loop {
        let chain = alive_chain(ctx, &path);
        let Some(&outer) = chain.first() else {
            return Ok(());
        };
        let outer_free = free_in(ctx, &ctx.st.old.nodes[outer].members).len();
        if outer_free < 2 {
            break;
        }
        rep.stage1_iterations += 1;
        let mut shells: Vec<(usize, Option<usize>, usize)> = (0..chain.len())
            .map(|i| {
                let d = chain.get(i + 1).copied();
                let f = free_in(ctx, &shell_members(ctx, chain[i], d)).len();
                (chain[i], d, f)
            })
            .filter(|s| s.2 >= 2)
            .collect();
        shells.sort_by(|a, b| {
            b.2.cmp(&a.2)
                .then(ctx.st.old.nodes[a.0].size().cmp(&ctx.st.old.nodes[b.0].size()))
        });
        claims.iter += 1;
        for (k, &(c, d, _)) in shells.iter().enumerate() {
            shell_search(ctx, &path, c, d, k + 1, claims, rep)?;
        }
    }
    let chain = alive_chain(ctx, &path);
    let outer = chain[0];
    let free = free_in(ctx, &ctx.st.old.nodes[outer].members);
    if free.len() != 1 {
        return violation(format!("blossom {} keeps {} free vertices", outer, free.len()));
    }
    let budget: i64 = chain.iter().map(|&x| ctx.st.old.nodes[x].z / 2).sum();
    for &x in &chain {
        ctx.st.liquidate_old(x);
    }
    let scope = ctx.st.old.nodes[r].members.clone();
    let old_z = ctx.st.old.z_above(r);
    let mut p = ctx.params(&free, Criterion::One);
    p.scope = Some(&scope);
    p.old_z = old_z;
    p.budget = Some(budget);
    p.process_at_budget = false;
    p.idle_to_budget = true;
    p.queue = QueueKind::Bucket;
    let out = ctx.eng.run(&mut ctx.st, &p)?;
    rep.search_calls += 1;
    rep.dual_adjustments += out.adjustments;
    rep.shadow_checks += out.shadow_checks;
    if out.augmented() {
        return violation(format!("last free vertex {} of blossom {} was matched", free[0], r));
    }
    Ok(())
}

fn shell_search(
    ctx: &mut Ctx,
    path: &[usize],
    c: usize,
    d: Option<usize>,
    id: usize,
    claims: &mut Claims,
    rep: &mut ScaleReport,
) -> SolveResult<()> {
    let alive = |ctx: &Ctx, i: usize| ctx.st.old.nodes[path[i]].alive;
    let mut ci = path.iter().position(|&x| x == c).unwrap();
    let mut di = d.map_or(path.len(), |d| path.iter().position(|&x| x == d).unwrap());
    let mut total = 0i64;
    let mut last_c = c;
    loop {
        let Some(cs) = (0..=ci).rev().find(|&i| alive(ctx, i)) else {
            break;
        };
        let ds = (di..path.len()).find(|&i| alive(ctx, i));
        let (cb, db) = (path[cs], ds.map(|i| path[i]));
        last_c = cb;
        if ctx.st.old.nodes[cb].z == 0 {
            ctx.st.old.kill(cb);
            continue;
        }
        if let Some(x) = db {
            if ctx.st.old.nodes[x].z == 0 {
                ctx.st.old.kill(x);
                continue;
            }
        }
        let shell = shell_members(ctx, cb, db);
        if shell
            .iter()
            .any(|&v| claims.stamp[v].0 == claims.iter && claims.stamp[v].1 != id)
        {
            break;
        }
        for &v in &shell {
            claims.stamp[v] = (claims.iter, id);
        }
        let free = free_in(ctx, &shell);
        if free.is_empty() {
            break;
        }
        let zc = ctx.st.old.nodes[cb].z;
        let budget = db.map_or(zc, |x| zc.min(ctx.st.old.nodes[x].z)) / 2;
        let mut p = ctx.params(&free, Criterion::One);
        p.scope = Some(&shell);
        p.old_z = ctx.st.old.z_from(cb);
        p.budget = Some(budget);
        p.queue = QueueKind::Bucket;
        p.idle_to_budget = true;
        p.process_at_budget = true;
        p.exhaust = true;
        let out = ctx.eng.run(&mut ctx.st, &p)?;
        let k = out.adjustments;
        rep.search_calls += 1;
        rep.shells_searched += 1;
        rep.shell_adjustments += k;
        rep.shadow_checks += out.shadow_checks;
        total += k;
        ctx.st.translate_old(cb, k);
        if let Some(x) = db {
            ctx.st.translate_old(x, k);
            if ctx.st.old.nodes[x].z == 0 {
                ctx.st.old.kill(x);
            }
        }
        let c_died = ctx.st.old.nodes[cb].z == 0;
        if c_died {
            ctx.st.old.kill(cb);
        }
        if out.augmented() {
            break;
        }
        if c_died && !(0..cs).any(|i| alive(ctx, i)) {
            break;
        }
        ci = cs;
        di = ds.unwrap_or(path.len());
    }
    let size = ctx.st.old.nodes[last_c].size() as i64;
    let bound = 3 * size;
    let (wa, wb) = rep.worst_shell;
    if wb == 0 || total * wb > wa * size {
        rep.worst_shell = (total, size);
    }
    if ctx.opts.check && total > bound {
        return violation(format!("shell search spent {} adjustments, bound {}", total, bound));
    }
    Ok(())
}
