"""Ordered key-value record store persisted as JSON lines

MIT License

(C) Copyright [2026] tactile_grasp authors

Permission is hereby granted, free of charge, to any person obtaining a
copy of this software and associated documentation files (the "Software"),
to deal in the Software without restriction, including without limitation
the rights to use, copy, modify, merge, publish, distribute, sublicense,
and/or sell copies of the Software, and to permit persons to whom the
Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included
in all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL
THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR
OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE,
ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR
OTHER DEALINGS IN THE SOFTWARE.
"""
import json
import os
import threading


class StoreLock:
    """A named lock handed out by KeyStore.lock().  There is one
    underlying threading.Lock per name, shared by every StoreLock with
    that name on the same store.

    """
    def __init__(self, name, thread_lock):
        """ Constructor

        """
        self.name = name
        self.thread_lock = thread_lock
        self.held = False

    def __enter__(self):
        """The enter operation to make this a context manager.

        """
        self.acquire()
        return self

    def __exit__(self, exception_type, exception_value, traceback):
        """The exit function to make this a context manager.

        """
        self.release()
        return False  # allow exceptions to propagate (if any)

    def acquire(self, timeout=None):
        """Acquire the lock, waiting at most 'timeout' seconds (forever
        when 'timeout' is None, not at all when it is 0).

        """
        if timeout is None:
            self.held = self.thread_lock.acquire()
        elif timeout == 0:
            self.held = self.thread_lock.acquire(blocking=False)
        else:
            self.held = self.thread_lock.acquire(timeout=timeout)
        return self.held

    def is_acquired(self):
        """Determine whether this StoreLock instance holds the lock.

        """
        return self.held

    def release(self):
        """Release the lock if this instance holds it.

        """
        if self.held:
            self.held = False
            self.thread_lock.release()


class KeyStore:
    """Thread-safe ordered key-value store.  Keys are strings of the form
    '<model prefix>/<record id>' and values are JSON strings.  The store
    keeps insertion order, so flushing the same sequence of puts always
    produces a byte-identical file.

    """
    def __init__(self, path=None):
        """Create an empty store, optionally associated with the JSON
        lines file at 'path' used by flush().

        """
        self.path = path
        self.keystore = {}
        self.lock_table = {}
        # To be thread-safe, we need to be able to lock when doing
        # things, make a store wide lock
        self.thread_lock = threading.Lock()

    def __len__(self):
        with self.thread_lock:
            return len(self.keystore)

    def get(self, key):
        """ The get operation, None if 'key' is absent.
        """
        with self.thread_lock:
            return self.keystore.get(key)

    def get_prefix(self, prefix):
        """Yield (key, value) for every key starting with 'prefix', in
        insertion order.

        """
        with self.thread_lock:
            items = [(key, value) for key, value in self.keystore.items()
                     if key.startswith(prefix)]
        yield from items

    def put(self, key, value):
        """The 'put' operation.  Overwriting a key keeps its original
        position in the ordering.

        """
        if not isinstance(value, str):
            raise TypeError("store values must be JSON strings")
        with self.thread_lock:
            self.keystore[key] = value

    def delete(self, key):
        """The 'delete' operation, delete the key / value from the keystore
        and return True or just return False if the key wasn't there
        to begin with.

        """
        with self.thread_lock:
            if key in self.keystore:
                del self.keystore[key]
                return True
        return False

    def lock(self, name):
        """Create a StoreLock instance suitable for use as a context
        manager.

        """
        with self.thread_lock:
            if name not in self.lock_table:
                self.lock_table[name] = threading.Lock()
            return StoreLock(name, self.lock_table[name])

    def flush(self, path=None):
        """Write the store to 'path' (or the path given at construction)
        as one JSON object per line: {"key": ..., "value": ...}.  The
        file is written to a temporary name and moved into place.

        """
        path = path or self.path
        if path is None:
            raise ValueError("no path to flush the store to")
        tmp_path = "%s.tmp" % path
        with self.thread_lock:
            items = list(self.keystore.items())
        with open(tmp_path, 'w', encoding='utf-8', newline='\n') as outfile:
            for key, value in items:
                outfile.write('{"key":%s,"value":%s}\n'
                              % (json.dumps(key), value))
        os.replace(tmp_path, path)
        return path


def open_store(path):
    """Load a KeyStore previously written by flush().  A missing file
    yields an empty store bound to 'path'.

    """
    store = KeyStore(path)
    if not os.path.exists(path):
        return store
    with open(path, 'r', encoding='utf-8') as infile:
        for line_number, line in enumerate(infile, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                item = json.loads(line)
                key = item['key']
                value = item['value']
            except (ValueError, KeyError, TypeError) as err:
                raise ValueError("%s:%d: malformed store line (%s)"
                                 % (path, line_number, err)) from err
            store.put(key, json.dumps(value, sort_keys=True,
                                      separators=(',', ':')))
    return store
