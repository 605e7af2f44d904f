#!/usr/bin/env python3
"""Freezes reference parse trees from html5lib for the parser conformance test.

Run from the repository root:
    python3 tests/tools/gen_reference_trees.py > tests/fixtures/dom/reference_trees.json

Trees are normalized the same way the test normalizes ours: comments are
dropped, adjacent text runs merged, whitespace-only text removed. Inputs
without an <html> tag are compared as the children of <body>; full
documents are compared from the <html> element down.
"""
import json
import pathlib
import sys

import html5lib

FRAGMENTS = [
    "<div><p>hi</p></div>",
    "<p>a<p>b",
    "",
    "<ul><li>one<li>two</ul>",
    "<li>a<li>b",
    "<dl><dt>term<dd>def<dt>term2</dl>",
    "<dd>a<dt>b",
    "<p>x<div>y</div>",
    "<p>one<hr>two",
    "<table><tbody><tr><td>a<td>b<tr><td>c</tbody></table>",
    "<select><option>a<option>b</select>",
    "<h1>a<h2>b</h2>",
    "x<h1>a</h2>b",
    "<p>a</p></p>b",
    "a<br>b</br>c",
    "<div id=a class='x y' id=b>t</div>",
    "<p>A &amp; B &copy; &#x41;&#66; &euro;</p>",
    "<p>unknown &foo; stays</p>",
    '<input type=text value="a&quot;b">',
    "<textarea>&lt;b&gt; raw</textarea>",
    "<b>bold<i>both</i></b>",
    "<a href=x>1<a href=y>2</a>",
    "<div><span>x</div>y",
    "<form><form><input></form>",
    "<span></div>x</span>",
    "<ul><li>a<ul><li>b</ul><li>c</ul>",
    "<button>a<button>b",
    "<p>x</p><script>if (a<b) { c(); }</script><p>y",
    "<img src=a><hr/><p>t",
    "<div><span>abc",
    "<p>café €</p>",
    "<!DOCTYPE html><p>a<!-- c -->b</p>",
    "<DIV CLASS=Up>Mixed</DIV>",
    "<p>a<ul><li>b</ul>",
    "<label for=q>Q</label><input id=q>",
    "<p><span>a</p>b",
    "<div><p>a</div>b",
    "<br/><br>",
    "<p>a<h3>b</h3>",
    "<option>a<optgroup>b<option>c",
]

DOCUMENTS = [
    "tests/fixtures/dom/f1_real_estate.html",
]


def normalize(children):
    out = []
    for node in children:
        if isinstance(node, str):
            if out and isinstance(out[-1], str):
                out[-1] += node
            else:
                out.append(node)
        else:
            out.append(node)
    return [n for n in out if not (isinstance(n, str) and n.strip(" \t\n\r\f") == "")]


def convert(el):
    children = []
    if el.text:
        children.append(el.text)
    for child in el:
        if isinstance(child.tag, str):
            children.append(convert(child))
        if child.tail:
            children.append(child.tail)
    return {"t": el.tag, "a": [[k, v] for k, v in el.attrib.items()], "c": normalize(children)}


def main():
    cases = []
    for src in FRAGMENTS:
        root = html5lib.parse(src, treebuilder="etree", namespaceHTMLElements=False)
        body = root.find("body")
        tree = convert(body)["c"]
        cases.append({"name": "fragment", "html": src, "tree": tree})
    for path in DOCUMENTS:
        src = pathlib.Path(path).read_text(encoding="utf-8")
        root = html5lib.parse(src, treebuilder="etree", namespaceHTMLElements=False)
        cases.append({"name": path, "html": src, "tree": [convert(root)]})
    json.dump({"generator": "html5lib " + html5lib.__version__, "cases": cases}, sys.stdout,
              ensure_ascii=False, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
