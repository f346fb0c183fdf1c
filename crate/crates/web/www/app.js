import init, { classify_coalition, fingerprint, check_domain } from "./pkg/agclone_web.js";

const show = (el, text) => {
  el.textContent = JSON.stringify(JSON.parse(text), null, 2);
};

// complementary pairs of subsets of {1,2,3}, the full set fixed
const PAIRS = [
  [[1], [2, 3]],
  [[2], [1, 3]],
  [[3], [1, 2]],
];

function coalitionPanel() {
  const root = document.querySelector("#coalition");
  const box = root.querySelector(".subsets");
  const out = root.querySelector(".out");
  PAIRS.forEach((pair, i) => {
    pair.forEach((set, j) => {
      const label = document.createElement("label");
      label.innerHTML = `<input type="radio" name="p${i}" value="${j}" ${j === 1 ? "checked" : ""}> {${set.join(",")}}`;
      box.appendChild(label);
    });
    box.appendChild(document.createElement("br"));
  });
  const update = () => {
    const members = PAIRS.map((pair, i) => pair[Number(box.querySelector(`input[name=p${i}]:checked`).value)]);
    members.push([1, 2, 3]);
    show(out, classify_coalition(JSON.stringify({ n: 3, members })));
  };
  box.addEventListener("change", update);
  update();
}

function fingerprintPanel() {
  const root = document.querySelector("#fingerprint");
  const run = () => show(root.querySelector(".out"), fingerprint(root.querySelector(".tt").value));
  root.querySelector("button").addEventListener("click", run);
  run();
}

function domainPanel() {
  const root = document.querySelector("#domain");
  const run = () =>
    show(
      root.querySelector(".out"),
      check_domain(
        root.querySelector(".rule").value,
        Number(root.querySelector(".m").value),
        root.querySelector(".members").value,
      ),
    );
  root.querySelector("button").addEventListener("click", run);
  run();
}

await init();
coalitionPanel();
fingerprintPanel();
domainPanel();
