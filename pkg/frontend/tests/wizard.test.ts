import { describe, expect, it } from "vitest";
import type { ApiClient } from "../src/client";
import { ApiError } from "../src/client";
import { MbtiWizard, renderWizardItem } from "../src/wizard";
import type { AssessmentItem, CourseState } from "../src/types";
import { makeState } from "./helpers";

function items(): AssessmentItem[] {
  return Array.from({ length: 14 }, (_, i) => ({
    number: i + 1,
    prompt: `item ${i + 1}`,
    option_a: "first option",
    option_b: "second option",
  }));
}

/** Records enroll/state calls; no network. */
function stubClient(response: CourseState, failFirst = false) {
  const calls: { method: string; args: unknown[] }[] = [];
  let enrollCount = 0;
  const client = {
    enroll: async (...args: unknown[]) => {
      calls.push({ method: "enroll", args });
      enrollCount += 1;
      if (failFirst && enrollCount > 1) {
        throw new ApiError("conflict", "already enrolled", 409);
      }
      return response;
    },
    state: async (...args: unknown[]) => {
      calls.push({ method: "state", args });
      return response;
    },
  };
  return { client: client as unknown as ApiClient, calls };
}

describe("forced-choice wizard", () => {
  it("collects exactly 14 answers, one per item", () => {
    const wizard = new MbtiWizard(items());
    while (!wizard.complete) wizard.choose("A");
    const collected = wizard.collected();
    expect(Object.keys(collected)).toHaveLength(14);
    expect(new Set(Object.values(collected))).toEqual(new Set(["A"]));
  });

  it("abandoning at item 7 posts nothing", async () => {
    const wizard = new MbtiWizard(items());
    for (let i = 0; i < 6; i += 1) wizard.choose("B");
    expect(wizard.currentItem?.number).toBe(7);
    const { client, calls } = stubClient(makeState("NT"));
    await expect(wizard.submit(client, "31285")).rejects.toThrow(/unanswered/);
    expect(calls).toHaveLength(0);
  });

  it("has no skip: the only way past an item is to choose", () => {
    const wizard = new MbtiWizard(items());
    expect(wizard.currentItem?.number).toBe(1);
    expect(() => wizard.collected()).toThrow(/forced choice/);
    wizard.choose("A");
    expect(wizard.currentItem?.number).toBe(2);
  });

  it("back() revisits an item and re-choosing overwrites the answer", () => {
    const wizard = new MbtiWizard(items());
    wizard.choose("A");
    wizard.back();
    wizard.choose("B");
    while (!wizard.complete) wizard.choose("A");
    expect(wizard.collected()[1]).toBe("B");
  });

  it("a retry after a conflict does not duplicate the enrollment", async () => {
    const wizard = new MbtiWizard(items());
    while (!wizard.complete) wizard.choose("A");
    const { client, calls } = stubClient(makeState("SF"), true);
    const first = await wizard.submit(client, "31285");
    const second = await wizard.submit(client, "31285"); // retry path
    expect(first.core).toBe("SF");
    expect(second.core).toBe("SF");
    expect(calls.map((c) => c.method)).toEqual(["enroll", "enroll", "state"]);
  });

  it("renders one item at a time with both options", () => {
    const wizard = new MbtiWizard(items());
    const html = renderWizardItem(wizard);
    expect(html).toContain('data-item="1"');
    expect(html).toContain('data-choice="A"');
    expect(html).toContain('data-choice="B"');
    expect(html).toContain("Item 1 of 14");
  });
});
