"""
Message Queue module for the CHAOS trainer.
Provides a centralized way to report progress messages to the user.
"""
from typing import List
from collections import deque


class MessageQueue:
    """
    Singleton class collecting user-facing progress messages.
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(MessageQueue, cls).__new__(cls)
            cls._instance._messages = deque(maxlen=200)
            cls._instance._quiet = False
        return cls._instance

    def add_message(self, text: str) -> None:
        """Add a message to the queue and echo it unless quiet"""
        self._messages.append(text)
        if not self._quiet:
            print(f"LOG: {text}")

    def get_messages(self, count: int = 10) -> List[str]:
        """Get the most recent messages, newest last"""
        return list(self._messages)[-count:]

    def clear(self) -> None:
        """Drop all retained messages"""
        self._messages.clear()

    def set_quiet(self, quiet: bool) -> None:
        """Suppress console echo (messages are still retained)"""
        self._quiet = quiet


# Create a singleton instance
message_queue = MessageQueue()

# Convenience functions
def add_message(text: str) -> None:
    """Add a message to the global message queue"""
    message_queue.add_message(text)

def get_messages(count: int = 10) -> List[str]:
    """Get recent messages from the global message queue"""
    return message_queue.get_messages(count)

def set_quiet(quiet: bool) -> None:
    """Silence or restore console output of the global message queue"""
    message_queue.set_quiet(quiet)

def clear_messages() -> None:
    """Drop all messages of the global message queue"""
    message_queue.clear()
