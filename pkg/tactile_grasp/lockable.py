"""Named single-writer locks on a record store

Anything that must be written by one thread at a time (a dataset being
collected, for instance) derives from Lockable and names its resource;
every Lockable using the same name on the same KeyStore shares one
lock.

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
import logging
import threading

LOGGER = logging.getLogger(__name__)


class LockHolder:
    """One attempt at a named store lock, usable with 'with'.  Entering
    the context tries to acquire the lock within the holder's timeout;
    check is_acquired() afterwards when the timeout is not None.

    """
    def __init__(self, store, name, timeout=None):
        self.name = name
        self.timeout = timeout
        self.store_lock = store.lock(name)

    def acquire(self):
        """ Try to take the lock, waiting at most self.timeout seconds.
        """
        if not self.store_lock.acquire(self.timeout):
            LOGGER.debug("%s: lock '%s' is busy (timeout %s)",
                         threading.current_thread().name, self.name,
                         self.timeout)
        return self

    def release(self):
        """ Give the lock back (a no-op when it was never acquired).
        """
        return self.store_lock.release()

    def is_acquired(self):
        """ True while this holder owns the lock.
        """
        return self.store_lock.is_acquired()

    def __enter__(self):
        return self.acquire()

    def __exit__(self, exception_type, exception_value, traceback):
        self.release()
        return False


class Lockable:
    """Mixin giving a resource a lock() method.

    Example:

        class Writer(Lockable):
            def __init__(self, store):
                Lockable.__init__(self, "/datasets/writer", store)

        with Writer(store).lock():
            ...  # only one writer at a time in here

    Parameters:

        name: the store wide name of the locked resource
        store: the KeyStore holding the lock

    """
    def __init__(self, name, store):
        self.lock_name = name
        self.lock_store = store

    def lock(self, timeout=None):
        """A LockHolder for this resource.  'timeout' is how long (s) to
        wait: None waits forever and 0 does not wait at all.

        """
        return LockHolder(self.lock_store, self.lock_name, timeout)
