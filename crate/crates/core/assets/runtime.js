// Cell bootstrap: wires every .giac-cell to an evaluator engine.
// An engine registered as window.castmlEngine = { name, evaluate(request) }
// is used when present; evaluate may return a response or a promise of one.
(function () {
  "use strict";
  var TIMEOUT_MS = 10000;

  function unavailable() {
    return {
      name: "none",
      evaluate: function (req) {
        return {
          id: req.id, status: "error", kind: "text",
          payload: "no evaluator engine is available in this page",
          diagnostics: ["no evaluator engine is available in this page"]
        };
      }
    };
  }

  function withTimeout(promise) {
    return new Promise(function (resolve, reject) {
      var timer = setTimeout(function () { reject(new Error("evaluation timed out")); }, TIMEOUT_MS);
      promise.then(function (v) { clearTimeout(timer); resolve(v); },
                   function (e) { clearTimeout(timer); reject(e); });
    });
  }

  function showError(out, message) {
    var div = document.createElement("div");
    div.className = "giac-error";
    div.textContent = message;
    out.replaceChildren(div);
  }

  function render(out, resp) {
    if (resp.status !== "ok") {
      showError(out, resp.payload || (resp.diagnostics || []).join("\n"));
      return;
    }
    if (resp.kind === "svg") {
      var doc = new DOMParser().parseFromString(resp.payload, "image/svg+xml");
      out.replaceChildren(document.importNode(doc.documentElement, true));
    } else if (resp.kind === "tex" && window.castmlTexToMathML) {
      var holder = document.createElement("div");
      holder.innerHTML = window.castmlTexToMathML(resp.payload);
      out.replaceChildren.apply(out, Array.prototype.slice.call(holder.childNodes));
    } else {
      var code = document.createElement("code");
      code.textContent = resp.payload;
      out.replaceChildren(code);
    }
  }

  function boot(root) {
    var engine = window.castmlEngine || unavailable();
    var handles = [];
    root.querySelectorAll(".giac-cell").forEach(function (el) {
      var h = {
        id: el.getAttribute("data-giac-id"),
        mode: el.getAttribute("data-giac-mode"),
        input: el.querySelector(".giac-in"),
        button: el.querySelector(".giac-run"),
        output: el.querySelector(".giac-out"),
        busy: false
      };
      var run = function () { runCell(engine, h); };
      h.button.addEventListener("click", run);
      h.input.addEventListener("keydown", function (ev) { if (ev.key === "Enter") { run(); } });
      handles.push(h);
    });
    return handles;
  }

  function runCell(engine, h) {
    if (h.busy) { return; }
    var command = h.input.value;
    if (command.trim() === "") { showError(h.output, "empty command"); return; }
    h.busy = true;
    h.button.disabled = true;
    var req = { id: h.id, command: command, mode: h.mode };
    withTimeout(Promise.resolve().then(function () { return engine.evaluate(req); }))
      .then(function (resp) { render(h.output, resp); },
            function (err) { showError(h.output, String(err && err.message || err)); })
      .then(function () { h.busy = false; h.button.disabled = false; });
  }

  window.castmlRuntime = { boot: boot };
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", function () { boot(document); });
  } else {
    boot(document);
  }
})();
