// Golden tests over recorded service responses for P2/P3/P4: view invariants
// on every entry, plus snapshot equality of the rendered markup.
// Regenerate snapshots with UPDATE_SNAPSHOTS=1 npm test.
import assert from "node:assert/strict";
import { readFileSync, existsSync, mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { test } from "node:test";
import { renderAll, renderCfg, renderSource, renderStack } from "../src/render.js";
import { buildViewModel } from "../src/viewmodel.js";
import * as dotModule from "../src/dot.js";
const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURES = join(HERE, "..", "..", "tests", "fixtures");
const SNAPSHOTS = join(HERE, "..", "..", "tests", "snapshots");
const UPDATE = process.env.UPDATE_SNAPSHOTS === "1";
function loadFixture(name) {
    return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8"));
}
function viewModels(fixture) {
    const sourceLines = fixture.source.split("\n");
    return fixture.entries.map((entry) => buildViewModel(sourceLines, entry, fixture.create.cfg));
}
const SEQUENTIAL = new Set(["next", "true", "false"]);
for (const name of ["p2", "p3", "p4"]) {
    const fixture = loadFixture(name);
    test(`${name}: highlighted source line always equals the top frame location`, () => {
        for (const vm of viewModels(fixture)) {
            const html = renderSource(vm);
            const matches = [...html.matchAll(/class="line current" data-line="(\d+)"/g)];
            const topLoc = vm.stack[0].loc;
            if (topLoc <= vm.sourceLines.length) {
                assert.equal(matches.length, 1, html);
                assert.equal(Number(matches[0][1]), topLoc);
            }
            else {
                assert.equal(matches.length, 0, "no highlight at the end location");
            }
        }
    });
    test(`${name}: stack view lists contexts top-first`, () => {
        for (const vm of viewModels(fixture)) {
            const html = renderStack(vm);
            const rows = [...html.matchAll(/<li class="frame( top)?" data-loc="(\d+)" data-env="(\d+)">/g)];
            assert.equal(rows.length, vm.stack.length);
            rows.forEach((row, i) => {
                assert.equal(Number(row[2]), vm.stack[i].loc);
                assert.equal(Number(row[3]), vm.stack[i].env);
                assert.equal(row[1] === " top", i === 0);
            });
        }
    });
    test(`${name}: CFG highlights exactly the last sequential edge`, () => {
        for (const [i, vm] of viewModels(fixture).entries()) {
            const entry = fixture.entries[i];
            const html = renderCfg(vm);
            const active = [...html.matchAll(/class="cfg-edge label-(\w+) active" data-from="(\d+)" data-to="(\d+)"/g)];
            if (SEQUENTIAL.has(entry.label)) {
                assert.equal(active.length, 1, `entry ${i} (${entry.label})`);
                assert.equal(active[0][1], entry.label);
                assert.equal(Number(active[0][2]), entry.preLoc);
                assert.equal(Number(active[0][3]), entry.state.stack[0].loc);
            }
            else {
                assert.equal(active.length, 0, `entry ${i} (${entry.label}) must not highlight`);
            }
        }
    });
    test(`${name}: rendered views match committed snapshots`, () => {
        mkdirSync(SNAPSHOTS, { recursive: true });
        for (const [i, vm] of viewModels(fixture).entries()) {
            const views = renderAll(vm);
            const blob = [
                `<!-- entry ${i} label=${fixture.entries[i].label} -->`,
                views.source,
                views.envTree,
                views.stack,
                views.cfg,
            ].join("\n");
            const path = join(SNAPSHOTS, `${name}-entry${String(i).padStart(2, "0")}.html`);
            if (UPDATE || !existsSync(path)) {
                writeFileSync(path, blob, "utf-8");
            }
            assert.equal(blob, readFileSync(path, "utf-8"), `snapshot ${path}`);
        }
    });
}
test("p3: environment tree shows the exact binding sets through the call", () => {
    const fixture = loadFixture("p3");
    const vms = viewModels(fixture);
    // entry 2 is the call step: env 1 appears as {a: 41, b: bottom}
    const callEntry = fixture.entries.findIndex((e) => e.label === "call");
    assert.ok(callEntry > 0);
    const midCall = vms[callEntry];
    const env1 = midCall.envTree.children.find((c) => c.envId === 1);
    assert.ok(env1, "env 1 must hang off the global environment");
    assert.deepEqual(env1.bindings.map((b) => [b.name, b.rendered]), [
        ["a", "41"],
        ["b", "⊥"],
    ]);
    const globalBindings = midCall.envTree.bindings.map((b) => [b.name, b.rendered]);
    assert.deepEqual(globalBindings, [["f", "closure@2(a)"]]);
    // after the body assignment, b is 42; after the return, r lands in global
    const afterBody = vms[callEntry + 1];
    const env1After = afterBody.envTree.children.find((c) => c.envId === 1);
    assert.deepEqual(env1After.bindings.map((b) => [b.name, b.rendered]), [
        ["a", "41"],
        ["b", "42"],
    ]);
    const final = vms[vms.length - 1];
    assert.equal(final.status.kind, "finished");
    const finalGlobal = final.envTree.bindings.map((b) => [b.name, b.rendered]);
    assert.deepEqual(finalGlobal, [
        ["f", "closure@2(a)"],
        ["r", "42"],
    ]);
    // the returned call's environment stays visible but is no longer referenced
    const env1Final = final.envTree.children.find((c) => c.envId === 1);
    assert.equal(env1Final.active, false);
});
test("p4: environment chain global <- outer <- inner while inner runs", () => {
    const fixture = loadFixture("p4");
    const vms = viewModels(fixture);
    const midInner = vms.findIndex((vm) => vm.stack.length === 3);
    assert.ok(midInner > 0, "inner call must put three contexts on the stack");
    const vm = vms[midInner];
    const outer = vm.envTree.children.find((c) => c.envId === 1);
    assert.ok(outer);
    const inner = outer.children.find((c) => c.envId === 2);
    assert.ok(inner, "inner's environment must be parented to outer's");
});
test("p2: while-false exit highlights the (2 -> 7, false) edge", () => {
    const fixture = loadFixture("p2");
    const vms = viewModels(fixture);
    const idx = fixture.entries.findIndex((e) => e.label === "false" && e.preLoc === 4);
    assert.ok(idx > 0, "the inner if must take its false edge");
    const falseExit = fixture.entries.findIndex((e) => e.label === "next" && e.preLoc === 5);
    assert.ok(falseExit > 0, "break routes through next");
    const html = renderCfg(vms[falseExit]);
    assert.match(html, /class="cfg-edge label-next active" data-from="5" data-to="7"/);
});
test("rendering is a pure function of the view model", () => {
    const fixture = loadFixture("p3");
    const vms = viewModels(fixture);
    for (const vm of vms) {
        assert.deepEqual(renderAll(vm), renderAll(vm));
    }
});
test("client-side DOT export matches the service's shape", () => {
    const fixture = loadFixture("p2");
    const { cfgToDot } = dotModule;
    const dot = cfgToDot(fixture.create.cfg);
    assert.ok(dot.startsWith("digraph cfg {"));
    assert.ok(dot.includes('2 -> 7 [label="false"];'));
    assert.ok(dot.includes('2 [label="2: While"];'));
    assert.ok(dot.trimEnd().endsWith("}"));
});
