// Small element builder so views stay readable without a framework.
export function el(tag, attrs = {}, ...children) {
    const node = document.createElement(tag);
    for (const [name, value] of Object.entries(attrs)) {
        if (typeof value === "function") {
            node.addEventListener(name.replace(/^on/, ""), value);
        }
        else if (typeof value === "boolean") {
            if (value)
                node.setAttribute(name, "");
        }
        else {
            node.setAttribute(name, String(value));
        }
    }
    for (const child of children) {
        if (child === null || child === undefined)
            continue;
        node.append(child instanceof Node ? child : document.createTextNode(child));
    }
    return node;
}
export function clear(node) {
    node.replaceChildren();
}
