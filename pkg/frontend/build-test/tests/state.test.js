import assert from "node:assert/strict";
import { test } from "node:test";
import { ConsoleState } from "../src/state.js";
import { referenceConfig } from "./validate.test.js";
function sweepResult(tag) {
    return {
        kind: "sweep",
        config_hash: `hash-${tag}`,
        argmax_pi: 1,
        points: [{ pi: 0, objective: tag, stderr: 0 }],
    };
}
test("one in-flight request per action kind", () => {
    const state = new ConsoleState(referenceConfig());
    const token = state.begin("sweep");
    assert.notEqual(token, null);
    assert.equal(state.begin("sweep"), null);
    assert.notEqual(state.begin("optimize"), null, "other kinds are independent");
    assert.ok(state.isBusy("sweep"));
});
test("responses settle in order and free the slot", () => {
    const state = new ConsoleState(referenceConfig());
    const token = state.begin("sweep");
    assert.ok(state.settle("sweep", token, sweepResult(1)));
    assert.equal(state.results.sweep.config_hash, "hash-1");
    assert.ok(!state.isBusy("sweep"));
});
test("stale responses are discarded by sequence number", () => {
    const state = new ConsoleState(referenceConfig());
    const stale = state.begin("sweep");
    state.abort("sweep", stale); // e.g. user retried after a failure
    const fresh = state.begin("sweep");
    assert.equal(state.settle("sweep", stale, sweepResult(1)), false);
    assert.equal(state.results.sweep, undefined);
    assert.ok(state.settle("sweep", fresh, sweepResult(2)));
    assert.equal(state.results.sweep.config_hash, "hash-2");
});
test("abort frees the slot only for the owning token", () => {
    const state = new ConsoleState(referenceConfig());
    const token = state.begin("optimize");
    state.abort("optimize", token - 1);
    assert.ok(state.isBusy("optimize"));
    state.abort("optimize", token);
    assert.ok(!state.isBusy("optimize"));
});
test("config edits flow through the validation mirror", () => {
    const state = new ConsoleState(referenceConfig());
    assert.ok(state.isValid());
    state.config.weights = [0.9, 0.9];
    assert.ok(!state.isValid());
    assert.ok(state.errors().some((e) => e.field === "weights"));
});
